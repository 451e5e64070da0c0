#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "subsvms/error.hpp"
#include "subsvms/kernel.hpp"
#include "subsvms/synth.hpp"

using namespace subsvms;

namespace {

LabeledDataset random_sparse(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> val(-1e3, 1e3);
  std::bernoulli_distribution keep(0.3);
  std::vector<FeatureVector> rows;
  std::vector<int> ys;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Feature> f;
    for (std::uint32_t j = 1; j <= 40; ++j)
      if (keep(rng)) f.push_back({j, val(rng) * std::pow(10.0, static_cast<int>(rng() % 13) - 6)});
    rows.emplace_back(std::move(f));
    ys.push_back(rng() % 2 ? kPositive : kNegative);
  }
  return LabeledDataset(std::move(rows), std::move(ys), 40);
}

}  // namespace

TEST_SUITE("dataset") {
  TEST_CASE("parse basic record") {
    const auto d = parse_libsvm("+1 1:0.5 3:2.0\n-1 2:1.0");
    CHECK(d.size() == 2);
    CHECK(d.dimension() == 3);
    CHECK(d.y(0) == 1);
    CHECK(d.y(1) == -1);
    CHECK(d.x(0)[1] == 0.5);
    CHECK(d.x(0)[2] == 0.0);
    CHECK(d.x(0)[3] == 2.0);
    CHECK(d.x(1)[2] == 1.0);
  }

  TEST_CASE("empty stream is an error") {
    CHECK_THROWS_WITH_AS(parse_libsvm(""), doctest::Contains("empty dataset"), ParseError);
    CHECK_THROWS_AS(parse_libsvm("\n\n  \n"), ParseError);
  }

  TEST_CASE("label spellings") {
    const auto d = parse_libsvm("1 1:1\n0 1:2\n-1 1:3\n+1.0 1:4\r\n");
    CHECK(d.labels()[0] == 1);
    CHECK(d.labels()[1] == -1);
    CHECK(d.labels()[2] == -1);
    CHECK(d.labels()[3] == 1);
    CHECK_THROWS_AS(parse_libsvm("2 1:1\n"), ParseError);
  }

  TEST_CASE("malformed records carry line numbers") {
    auto line_of = [](const char* text) {
      try {
        parse_libsvm(text);
      } catch (const ParseError& e) {
        return e.line();
      }
      return std::size_t{0};
    };
    CHECK(line_of("+1 1:1\n-1 2:1 1:3\n") == 2);
    CHECK(line_of("+1 1:1\n-1 0:1\n") == 2);
    CHECK(line_of("+1 1:nan\n") == 1);
    CHECK(line_of("+1 1:1\n\n-1 x\n") == 3);
    CHECK(line_of("+1 1:1e999\n") == 1);
    CHECK(line_of("+1 1\n") == 1);
  }

  TEST_CASE("one point writes minimal text") {
    const LabeledDataset d({FeatureVector({{1, 1.0}})}, {kPositive});
    CHECK(write_libsvm(d) == "+1 1:1\n");
  }

  TEST_CASE("explicit zeros are dropped on write") {
    const LabeledDataset d({FeatureVector({{1, 0.0}, {2, 3.5}, {4, 0.0}})}, {kNegative});
    CHECK(write_libsvm(d) == "-1 2:3.5\n");
    CHECK(write_libsvm(parse_libsvm("-1 1:0 2:3.5 4:0\n")) == "-1 2:3.5\n");
  }

  TEST_CASE("random sparse datasets round-trip") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      const auto d = random_sparse(rng, 100);
      const auto text = write_libsvm(d);
      const auto back = parse_libsvm(text);
      REQUIRE(back == d);
      // write . parse . write is a fixed point.
      CHECK(write_libsvm(back) == text);
      for (std::size_t i = 0; i < d.size(); ++i)
        for (const auto& f : d.x(i).entries()) CHECK(back.x(i)[f.index] == f.value);
    }
  }

  TEST_CASE("feature vector invariants") {
    CHECK_THROWS_AS(FeatureVector({{2, 1.0}, {2, 1.0}}), InvalidArgument);
    CHECK_THROWS_AS(FeatureVector({{0, 1.0}}), InvalidArgument);
    CHECK_THROWS_AS(FeatureVector({{1, INFINITY}}), InvalidArgument);
    const FeatureVector a({{1, 3.0}, {4, 4.0}});
    const FeatureVector b({{1, 1.0}, {2, 2.0}});
    CHECK(a.squared_norm() == 25.0);
    CHECK(dot(a, b) == 3.0);
    CHECK(squared_distance(a, b) == doctest::Approx(4.0 + 4.0 + 16.0));
    CHECK_THROWS_AS(LabeledDataset({a}, {kPositive}, 3), InvalidArgument);
    CHECK_THROWS_AS(LabeledDataset({a}, {2}), InvalidArgument);
  }

  TEST_CASE("class statistics") {
    const auto a1a = class_stats(testing::counts_to_labels(395, 1605 - 395));
    CHECK(a1a.minority_label == kPositive);
    CHECK(a1a.beta == doctest::Approx(0.2461).epsilon(1e-3));
    CHECK(a1a.minority_count == 395);

    const auto tie = class_stats(testing::counts_to_labels(500, 500));
    CHECK(tie.minority_label == kPositive);
    CHECK(tie.beta == 0.5);

    const auto five = class_stats(testing::counts_to_labels(950, 50));
    CHECK(five.minority_label == kNegative);
    CHECK(five.beta == doctest::Approx(0.05));
    CHECK(five.minority_indices.size() == 50);
    CHECK(five.majority_indices.size() == 950);
  }

  TEST_CASE("radius and margin of the analytic two-point problem") {
    const auto d = testing::dense_dataset({{1.0}, {-1.0}}, {1, -1});
    CHECK(estimate_radius(d, KernelSpec::linear()) == doctest::Approx(1.0));
    CHECK(estimate_margin(d, KernelSpec::linear()) == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("points on the unit circle have radius one") {
    std::vector<std::vector<double>> xs;
    std::vector<int> ys;
    for (int k = 0; k < 36; ++k) {
      xs.push_back({std::cos(k * M_PI / 18), std::sin(k * M_PI / 18)});
      ys.push_back(k % 2 ? 1 : -1);
    }
    CHECK(estimate_radius(testing::dense_dataset(xs, ys), KernelSpec::linear()) ==
          doctest::Approx(1.0));
    // Every point maps onto the RBF feature-space unit sphere.
    CHECK(estimate_radius(testing::dense_dataset(xs, ys), KernelSpec::rbf(0.3)) == doctest::Approx(1.0));
  }

  TEST_CASE("margin of enforced-band synthetic data") {
    SynthSpec spec;
    spec.count = 300;
    spec.beta = 0.3;
    spec.seed = 11;
    const auto d = generate(spec);
    CHECK(estimate_margin(d, KernelSpec::linear()) >= 0.1 - 1e-6);
  }

  TEST_CASE("non-separable data is reported") {
    const auto d = testing::dense_dataset({{0.0}, {0.0}, {1.0}}, {1, -1, 1});
    CHECK_THROWS_AS(estimate_margin(d, KernelSpec::linear()), NonSeparableError);
  }
}
