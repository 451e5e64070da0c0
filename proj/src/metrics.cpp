#include "subsvms/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "subsvms/error.hpp"

namespace subsvms {

Confusion confusion(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) throw InvalidArgument("prediction/truth length mismatch");
  Confusion c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool p = predicted[i] > 0, t = truth[i] > 0;
    if (p && t) ++c.tp;
    else if (p) ++c.fp;
    else if (t) ++c.fn;
    else ++c.tn;
  }
  return c;
}

double accuracy(const Confusion& c) {
  if (c.total() == 0) throw InvalidArgument("accuracy of an empty set");
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

double bac(const Confusion& c) {
  if (c.tp + c.fn == 0 || c.tn + c.fp == 0)
    throw InvalidArgument("balanced accuracy needs both classes in the truth labels");
  const double sensitivity = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  const double specificity = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
  return (sensitivity + specificity) / 2.0;
}

double sif(double tpr, double fpr) { return 2.0 * tpr / (tpr + fpr + 1.0); }

double sif(const Confusion& c) {
  if (c.tp + c.fn == 0 || c.tn + c.fp == 0)
    throw InvalidArgument("SIF needs both classes in the truth labels");
  return sif(static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn),
             static_cast<double>(c.fp) / static_cast<double>(c.fp + c.tn));
}

double auc(std::span<const double> scores, std::span<const int> truth) {
  if (scores.size() != truth.size()) throw InvalidArgument("score/truth length mismatch");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Sum of mid-ranks of the positives.
  double rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double mid = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k)
      if (truth[order[k]] > 0) {
        rank_sum += mid;
        ++n_pos;
      }
    i = j;
  }
  const std::size_t n_neg = truth.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw InvalidArgument("AUC needs both classes in the truth labels");
  const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
  return (rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

MetricsReport evaluate(std::span<const int> predicted, std::span<const double> scores,
                       std::span<const int> truth) {
  MetricsReport r;
  r.confusion = confusion(predicted, truth);
  r.accuracy = accuracy(r.confusion);
  r.bac = bac(r.confusion);
  r.sif = sif(r.confusion);
  r.auc = auc(scores, truth);
  return r;
}

double recovery_rate(const LabeledDataset& recovered, const LabeledDataset& clean) {
  if (recovered.size() != clean.size() || !recovered.same_features(clean))
    throw InvalidArgument("recovery rate needs the same points in the same order");
  std::size_t same = 0;
  for (std::size_t i = 0; i < clean.size(); ++i) same += recovered.y(i) == clean.y(i);
  return static_cast<double>(same) / static_cast<double>(clean.size());
}

}  // namespace subsvms
