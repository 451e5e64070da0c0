#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "subsvms/dataset.hpp"

namespace testing {

inline subsvms::LabeledDataset dense_dataset(const std::vector<std::vector<double>>& xs,
                                             const std::vector<int>& ys) {
  std::vector<subsvms::FeatureVector> rows;
  for (const auto& x : xs) rows.push_back(subsvms::FeatureVector::dense(x));
  return subsvms::LabeledDataset(std::move(rows), ys);
}

// Features are irrelevant for label-only tests; one coordinate carries the index.
inline subsvms::LabeledDataset labels_only(const std::vector<int>& ys) {
  std::vector<subsvms::FeatureVector> rows;
  for (std::size_t i = 0; i < ys.size(); ++i)
    rows.push_back(subsvms::FeatureVector({{1, static_cast<double>(i + 1)}}));
  return subsvms::LabeledDataset(std::move(rows), ys);
}

inline std::vector<int> counts_to_labels(std::size_t positives, std::size_t negatives) {
  std::vector<int> y(positives, subsvms::kPositive);
  y.insert(y.end(), negatives, subsvms::kNegative);
  return y;
}

// Random 2-D instance whose classes are split by a random line with a gap.
inline subsvms::LabeledDataset random_separable_2d(std::mt19937_64& rng, std::size_t n, double gap) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double angle = u(rng) * M_PI;
  const double nx = std::cos(angle), ny = std::sin(angle), off = 0.3 * u(rng);
  std::vector<std::vector<double>> xs;
  std::vector<int> ys;
  while (xs.size() < n) {
    const double a = u(rng), b = u(rng);
    const double side = nx * a + ny * b - off;
    if (std::abs(side) < gap) continue;
    const int y = side > 0 ? 1 : -1;
    // Make sure both classes appear.
    if (xs.size() == n - 1 && std::count(ys.begin(), ys.end(), y) == static_cast<long>(ys.size())) continue;
    xs.push_back({a, b});
    ys.push_back(y);
  }
  return dense_dataset(xs, ys);
}

}  // namespace testing
