#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "subsvms/ensemble.hpp"
#include "subsvms/error.hpp"
#include "subsvms/rng.hpp"
#include "subsvms/sampling.hpp"
#include "subsvms/synth.hpp"

using namespace subsvms;

namespace {

SvmModel constant(double bias) {
  SvmModel m;
  m.kernel = KernelSpec::linear();
  m.bias = bias;
  m.degenerate = true;
  return m;
}

EnsembleModel voters(std::initializer_list<double> biases) {
  EnsembleModel e;
  for (double b : biases) e.members.push_back(constant(b));
  e.config.members = e.members.size();
  return e;
}

LabeledDataset synth(std::size_t n, double beta, std::uint64_t seed) {
  SynthSpec spec;
  spec.count = n;
  spec.beta = beta;
  spec.seed = seed;
  return generate(spec);
}

}  // namespace

TEST_SUITE("ensemble") {
  TEST_CASE("subsample sizes") {
    CHECK(subsample_size(1000, SubsampleRule::log_squared) == 48);
    CHECK(subsample_size(1000, SubsampleRule::log) == 7);
    CHECK(subsample_size(2, SubsampleRule::log) == 2);
    CHECK(subsample_size(3000, SubsampleRule::log_squared) == 65);
  }

  TEST_CASE("unanimous vote") {
    const auto d = testing::labels_only({-1, 1, -1});
    const auto r = correct(d, voters({1.0, 2.0, 0.5}), TieRule::keep_observed);
    for (std::size_t i = 0; i < d.size(); ++i) {
      CHECK(r.corrected.y(i) == 1);
      CHECK(r.vote_fraction[i] == 1.0);
    }
    CHECK(r.changed == std::vector<std::size_t>{0, 2});
    CHECK(r.corrected.same_features(d));
  }

  TEST_CASE("tie rules") {
    const auto d = testing::labels_only({-1, 1});
    const auto e = voters({1.0, 1.0, -1.0, -1.0});
    const auto keep = correct(d, e, TieRule::keep_observed);
    CHECK(keep.corrected.y(0) == -1);
    CHECK(keep.corrected.y(1) == 1);
    CHECK(keep.changed.empty());
    CHECK(keep.vote_fraction[0] == 0.5);
    const auto pos = correct(d, e, TieRule::positive);
    CHECK(pos.corrected.y(0) == 1);
    CHECK(pos.changed == std::vector<std::size_t>{0});
    const Vote v = predict_vote(e, FeatureVector());
    CHECK(v.positive_fraction == 0.5);
    CHECK(tie_rule_from_string("positive") == TieRule::positive);
    CHECK_THROWS_AS(tie_rule_from_string("coin"), InvalidArgument);
  }

  TEST_CASE("majority vote") {
    const auto e = voters({1.0, -1.0, -1.0});
    const auto v = predict_vote(e, FeatureVector());
    CHECK(v.label == -1);
    CHECK(v.positive_fraction == doctest::Approx(1.0 / 3.0));
  }

  TEST_CASE("one member is one SVM on its subsample") {
    const auto d = synth(200, 0.3, 4);
    EnsembleConfig cfg;
    cfg.members = 1;
    cfg.sampler = {class_stats(d).beta, 48, 123};
    cfg.kernel = KernelSpec::rbf(0.5);
    const auto ens = train_ensemble(d, cfg);
    REQUIRE(ens.members.size() == 1);
    const auto idx = p_biased_sample(class_stats(d), {cfg.sampler.p, 48, derive_seed(123, 0)});
    const auto direct = train(d, idx, cfg.kernel, cfg.train);
    for (std::size_t i = 0; i < d.size(); i += 7)
      CHECK(ens.members[0].decision_value(d.x(i)) == doctest::Approx(direct.decision_value(d.x(i))));
  }

  TEST_CASE("members are accurate on clean separable data") {
    const auto d = synth(1000, 0.25, 8);
    EnsembleConfig cfg;
    cfg.members = 128;
    cfg.sampler = {0.5, subsample_size(d.size(), SubsampleRule::log_squared), 1};
    cfg.kernel = KernelSpec::rbf(0.5);
    const auto ens = train_ensemble(d, cfg);
    REQUIRE(ens.members.size() == 128);
    for (const auto& m : ens.members) {
      std::size_t right = 0;
      for (std::size_t i = 0; i < d.size(); ++i) right += m.predict(d.x(i)) == d.y(i);
      CHECK(right >= 950);
    }
  }

  TEST_CASE("same seed, same members, any thread count") {
    const auto d = synth(300, 0.25, 2);
    EnsembleConfig cfg;
    cfg.members = 16;
    cfg.sampler = {0.5, 40, 77};
    cfg.kernel = KernelSpec::rbf(0.5);
    const auto a = train_ensemble(d, cfg);
    cfg.threads = 4;
    const auto b = train_ensemble(d, cfg);
    REQUIRE(a.members.size() == b.members.size());
    for (std::size_t j = 0; j < a.members.size(); ++j)
      for (std::size_t i = 0; i < d.size(); i += 5)
        CHECK(a.members[j].decision_value(d.x(i)) == b.members[j].decision_value(d.x(i)));
    CHECK(correct(d, a, TieRule::keep_observed).corrected == correct(d, b, TieRule::keep_observed).corrected);
  }

  TEST_CASE("regularity of two separated clusters") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0.0, 0.1);
    std::vector<std::vector<double>> xs;
    std::vector<int> ys;
    for (int i = 0; i < 200; ++i) {
      const int y = i % 2 ? 1 : -1;
      xs.push_back({3.0 * y + n(rng), n(rng)});
      ys.push_back(y);
    }
    const auto d = testing::dense_dataset(xs, ys);
    const auto est = estimate_regularity(d, 8, 0.1, 40, 0.5, KernelSpec::linear(), TrainConfig{}, 3);
    CHECK(est.theta_hat == 0.0);
    CHECK(est.error_rates.size() == 40);
  }

  TEST_CASE("regularity of coin-flip labels") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::vector<double>> xs;
    std::vector<int> ys;
    for (int i = 0; i < 2000; ++i) {
      xs.push_back({u(rng), u(rng)});
      ys.push_back(rng() % 2 ? 1 : -1);
    }
    const auto d = testing::dense_dataset(xs, ys);
    const auto est = estimate_regularity(d, 32, 0.1, 40, 0.5, KernelSpec::rbf(0.5), TrainConfig{}, 5);
    // A nearly constant error rate of one half, whatever the subsample.
    CHECK(std::abs(est.error_rates[est.error_rates.size() / 2] - 0.5) <= 0.05);
    CHECK(std::abs(est.theta_hat - 0.5) <= 0.05);
  }

  TEST_CASE("regularity does not get worse with larger subsamples") {
    const auto d = synth(1000, 0.3, 6);
    double prev = 1.0;
    for (std::size_t r : {4, 8, 16, 32}) {
      const auto est = estimate_regularity(d, r, 0.1, 40, 0.5, KernelSpec::linear(), TrainConfig{}, 9);
      CAPTURE(r);
      CHECK(est.theta_hat <= prev + 1e-12);
      prev = est.theta_hat;
    }
  }

  TEST_CASE("ensemble config validation") {
    const auto d = synth(100, 0.3, 1);
    EnsembleConfig cfg;
    cfg.members = 0;
    CHECK_THROWS_AS(train_ensemble(d, cfg), InvalidArgument);
    CHECK_THROWS_AS(estimate_regularity(d, 8, 0.1, 5, 0.5, KernelSpec::linear(), TrainConfig{}), InvalidArgument);
  }
}
