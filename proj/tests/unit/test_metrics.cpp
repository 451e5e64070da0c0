#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "subsvms/error.hpp"
#include "subsvms/metrics.hpp"

using namespace subsvms;

namespace {

// Pair-counting AUC, independent of any ranking.
double auc_pairs(const std::vector<double>& s, const std::vector<int>& y) {
  double num = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      if (y[i] > 0 && y[j] < 0) {
        pairs += 1;
        num += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
      }
  return num / pairs;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("confusion counts") {
    const std::vector<int> truth{1, 1, -1, -1};
    const auto all_right = confusion(truth, truth);
    CHECK(all_right.fp == 0);
    CHECK(all_right.fn == 0);
    const auto all_wrong = confusion(std::vector<int>{-1, -1, 1, 1}, truth);
    CHECK(all_wrong.tp == 0);
    CHECK(all_wrong.tn == 0);
    CHECK(confusion(std::vector<int>{1, -1, -1, 1}, truth) == Confusion{1, 1, 1, 1});
    CHECK_THROWS_AS(confusion(std::vector<int>{1}, truth), InvalidArgument);
  }

  TEST_CASE("balanced accuracy") {
    CHECK(bac(Confusion{50, 10, 90, 50}) == doctest::Approx(0.7));
    CHECK(bac(Confusion{10, 0, 30, 0}) == 1.0);
    CHECK(bac(Confusion{10, 30, 0, 0}) == 0.5);
    CHECK(bac(Confusion{0, 0, 30, 10}) == 0.5);
    CHECK_THROWS_AS(bac(Confusion{5, 0, 0, 5}), InvalidArgument);
  }

  TEST_CASE("skew-insensitive F") {
    CHECK(sif(1.0, 0.0) == 1.0);
    CHECK(sif(0.0, 0.7) == 0.0);
    CHECK(sif(0.8, 0.2) == doctest::Approx(0.8));
    // On a balanced set SIF equals the F-score.
    const Confusion c{30, 10, 40, 20};
    const double f = 2.0 * c.tp / (2.0 * c.tp + c.fp + c.fn);
    CHECK(sif(c) == doctest::Approx(f));
  }

  TEST_CASE("AUC edge cases") {
    CHECK(auc(std::vector<double>{0.9, 0.8, 0.1}, std::vector<int>{1, 1, -1}) == 1.0);
    CHECK(auc(std::vector<double>{2, 2, 2, 2}, std::vector<int>{1, -1, 1, -1}) == 0.5);
    CHECK_THROWS_AS(auc(std::vector<double>{1, 2}, std::vector<int>{1, 1}), InvalidArgument);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> s(20'000);
    std::vector<int> y(20'000);
    for (std::size_t i = 0; i < s.size(); ++i) {
      s[i] = u(rng);
      y[i] = rng() % 2 ? 1 : -1;
    }
    CHECK(std::abs(auc(s, y) - 0.5) <= 0.02);
  }

  TEST_CASE("AUC ignores monotone rescaling") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> n;
    for (int t = 0; t < 50; ++t) {
      std::vector<double> s(40), g(40);
      std::vector<int> y(40);
      for (int i = 0; i < 40; ++i) {
        y[i] = i % 3 ? -1 : 1;
        s[i] = std::round(4 * (n(rng) + 0.5 * y[i])) / 4;
        g[i] = std::exp(3 * s[i]) - 7;
      }
      CHECK(auc(g, y) == auc(s, y));
    }
  }

  TEST_CASE("random instances against brute force") {
    std::mt19937_64 rng(10);
    for (int t = 0; t < 1000; ++t) {
      const std::size_t n = 2 + rng() % 30;
      std::vector<int> y(n), pred(n);
      std::vector<double> s(n);
      for (std::size_t i = 0; i < n; ++i) {
        y[i] = rng() % 2 ? 1 : -1;
        pred[i] = rng() % 2 ? 1 : -1;
        s[i] = static_cast<double>(rng() % 7);
      }
      y[0] = 1;
      y[1] = -1;
      std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (pred[i] == 1 && y[i] == 1) ++tp;
        if (pred[i] == 1 && y[i] == -1) ++fp;
        if (pred[i] == -1 && y[i] == -1) ++tn;
        if (pred[i] == -1 && y[i] == 1) ++fn;
      }
      const auto r = evaluate(pred, s, y);
      CHECK(r.confusion == Confusion{tp, fp, tn, fn});
      const double tpr = double(tp) / (tp + fn), tnr = double(tn) / (tn + fp);
      CHECK(r.bac == (tpr + tnr) / 2);
      const double fpr = double(fp) / (fp + tn);
      CHECK(r.sif == 2 * tpr / (tpr + fpr + 1));
      CHECK(r.auc == doctest::Approx(auc_pairs(s, y)).epsilon(1e-15));
      CHECK(r.accuracy == doctest::Approx(double(tp + tn) / n).epsilon(1e-15));
    }
  }

  TEST_CASE("BAC equals accuracy on balanced truth") {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 200; ++t) {
      const std::size_t half = 1 + rng() % 20;
      std::vector<int> y = testing::counts_to_labels(half, half), pred(2 * half);
      for (auto& p : pred) p = rng() % 2 ? 1 : -1;
      const auto c = confusion(pred, y);
      CHECK(bac(c) == doctest::Approx(accuracy(c)).epsilon(1e-15));
    }
  }

  TEST_CASE("recovery rate") {
    const auto clean = testing::labels_only(testing::counts_to_labels(250, 750));
    CHECK(recovery_rate(clean, clean) == 1.0);
    std::vector<int> flipped(clean.labels().begin(), clean.labels().end());
    for (auto& y : flipped) y = -y;
    CHECK(recovery_rate(clean.with_labels(flipped), clean) == 0.0);
    std::vector<int> some(clean.labels().begin(), clean.labels().end());
    for (int i = 0; i < 187; ++i) some[i] = -some[i];
    CHECK(recovery_rate(clean.with_labels(some), clean) == doctest::Approx(0.813));
    const auto other = testing::labels_only(testing::counts_to_labels(10, 10));
    CHECK_THROWS_AS(recovery_rate(other, clean), InvalidArgument);
  }
}
