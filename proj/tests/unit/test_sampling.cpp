#include <cmath>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "subsvms/error.hpp"
#include "subsvms/sampling.hpp"

using namespace subsvms;

TEST_SUITE("sampling") {
  TEST_CASE("class-balanced draws over a 90/10 set") {
    const auto d = testing::labels_only(testing::counts_to_labels(100, 900));
    const auto idx = p_biased_sample(d, {0.5, 1'000'000, 3});
    REQUIRE(idx.size() == 1'000'000);
    std::size_t minority = 0;
    for (auto i : idx) minority += d.y(i) == kPositive;
    // 4 binomial standard deviations is 0.002 at s = 10^6.
    CHECK(std::abs(minority / 1e6 - 0.5) <= 0.002);
  }

  TEST_CASE("within-class draws are uniform") {
    const auto d = testing::labels_only(testing::counts_to_labels(4, 12));
    std::vector<std::size_t> hits(d.size(), 0);
    const std::size_t s = 400'000;
    for (auto i : p_biased_sample(d, {0.3, s, 5})) ++hits[i];
    for (std::size_t i = 0; i < 4; ++i) CHECK(hits[i] / double(s) == doctest::Approx(0.3 / 4).epsilon(0.03));
    for (std::size_t i = 4; i < 16; ++i) CHECK(hits[i] / double(s) == doctest::Approx(0.7 / 12).epsilon(0.03));
  }

  TEST_CASE("p equal to the minority share is uniform sampling") {
    for (auto [pos, neg] : {std::pair{10, 90}, {37, 63}, {1, 999}, {250, 750}}) {
      const auto st = class_stats(testing::counts_to_labels(pos, neg));
      const auto [pa, pb] = point_probabilities(st, st.beta);
      CHECK(pa == doctest::Approx(1.0 / (pos + neg)).epsilon(1e-12));
      CHECK(pb == doctest::Approx(1.0 / (pos + neg)).epsilon(1e-12));
    }
  }

  TEST_CASE("extreme p picks the minority class") {
    const auto d = testing::labels_only(testing::counts_to_labels(5, 95));
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto idx = p_biased_sample(d, {1.0 - 0x1.0p-53, 1, seed});
      REQUIRE(idx.size() == 1);
      CHECK(d.y(idx[0]) == kPositive);
    }
  }

  TEST_CASE("sampler determinism and validation") {
    const auto d = testing::labels_only(testing::counts_to_labels(30, 70));
    CHECK(p_biased_sample(d, {0.5, 50, 9}) == p_biased_sample(d, {0.5, 50, 9}));
    CHECK(p_biased_sample(d, {0.5, 50, 9}) != p_biased_sample(d, {0.5, 50, 10}));
    CHECK_THROWS_AS(p_biased_sample(d, {0.0, 10, 0}), InvalidArgument);
    CHECK_THROWS_AS(p_biased_sample(d, {1.0, 10, 0}), InvalidArgument);
    CHECK_THROWS_AS(p_biased_sample(d, {0.5, 0, 0}), InvalidArgument);
    const auto one_class = testing::labels_only(testing::counts_to_labels(0, 10));
    CHECK_THROWS_AS(p_biased_sample(one_class, {0.5, 4, 0}), InvalidArgument);
  }

  TEST_CASE("bootstrap distinct fraction") {
    const auto idx = bootstrap_sample(10'000, 10'000, 21);
    const std::set<std::size_t> distinct(idx.begin(), idx.end());
    CHECK(std::abs(distinct.size() / 1e4 - (1.0 - std::exp(-1.0))) <= 0.01);
    for (auto i : idx) CHECK(i < 10'000);
  }

  TEST_CASE("bootstrap edge cases") {
    CHECK(bootstrap_sample(10, 0, 1).empty());
    CHECK(bootstrap_sample(10, 25, 1) == bootstrap_sample(10, 25, 1));
    CHECK(bootstrap_sample(10, 25, 1) != bootstrap_sample(10, 25, 2));
    CHECK_THROWS_AS(bootstrap_sample(0, 5, 1), InvalidArgument);
  }
}
