#pragma once

#include <cstddef>
#include <span>

#include "subsvms/dataset.hpp"

namespace subsvms {

// Positive class is +1.
struct Confusion {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  bool operator==(const Confusion&) const = default;
};

struct MetricsReport {
  double accuracy = 0.0;
  double bac = 0.0;
  double sif = 0.0;
  double auc = 0.0;
  Confusion confusion;
};

Confusion confusion(std::span<const int> predicted, std::span<const int> truth);

double accuracy(const Confusion& c);
// (tp / (tp + fn) + tn / (tn + fp)) / 2.
double bac(const Confusion& c);
// 2 tpr / (tpr + fpr + 1).
double sif(double tpr, double fpr);
double sif(const Confusion& c);
// Mann-Whitney statistic; tied scores count 1/2.
double auc(std::span<const double> scores, std::span<const int> truth);

MetricsReport evaluate(std::span<const int> predicted, std::span<const double> scores,
                       std::span<const int> truth);

// Fraction of points whose label in `recovered` matches `clean`.
double recovery_rate(const LabeledDataset& recovered, const LabeledDataset& clean);

}  // namespace subsvms
