#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "subsvms/dataset.hpp"
#include "subsvms/kernel.hpp"

namespace subsvms {

enum class Loss { l1, l2 };

std::string to_string(Loss loss);
Loss loss_from_string(const std::string& name);

struct TrainConfig {
  double C = 100.0;
  // C_+ / C_-: positive points get penalty C * W, negative points C.
  double class_weight_ratio = 1.0;
  Loss loss = Loss::l2;
  // Stopping threshold on the maximal KKT violation.
  double tolerance = 1e-3;
  std::size_t max_passes = 10'000'000;
  // L2 loss adds 1 / (l2_shift_divisor * C_i) to the kernel diagonal; the
  // default 2 pairs with the primal penalty C_i * xi_i^2.
  double l2_shift_divisor = 2.0;

  double penalty(int label) const noexcept { return label > 0 ? C * class_weight_ratio : C; }
  double l2_shift(int label) const noexcept { return 1.0 / (l2_shift_divisor * penalty(label)); }
  void validate() const;
};

struct SupportVector {
  std::size_t index;  // position in the training sequence
  FeatureVector x;
  int label;
  double alpha;
};

struct SvmModel {
  std::vector<SupportVector> support_vectors;
  double bias = 0.0;
  KernelSpec kernel;
  // ||xi||^2 with xi_i = max(0, 1 - y_i f(x_i)) over the training points.
  double slack_norm_sq = 0.0;
  // Trained on a single class: constant classifier returning `bias`'s sign.
  bool degenerate = false;

  // Solver diagnostics.
  std::size_t iterations = 0;
  double kkt_violation = 0.0;
  double dual_objective = 0.0;
  double primal_objective = 0.0;

  double decision_value(const FeatureVector& x) const noexcept;
  // sign(decision_value); 0 maps to +1.
  int predict(const FeatureVector& x) const noexcept;
  // ||w||^2 in feature space.
  double weight_norm_sq() const noexcept;
  // 1 / ||w||; infinity for a degenerate model.
  double geometric_margin() const noexcept;
};

// Observer of the dual objective (maximisation form) after every SMO step.
using ObjectiveObserver = std::function<void(double)>;

SvmModel train(const LabeledDataset& data, const KernelSpec& kernel, const TrainConfig& cfg,
               const ObjectiveObserver& observer = {});
// Trains on data.subset(indices); duplicates in `indices` are distinct
// training points.
SvmModel train(const LabeledDataset& data, std::span<const std::size_t> indices,
               const KernelSpec& kernel, const TrainConfig& cfg,
               const ObjectiveObserver& observer = {});

inline double decision_value(const SvmModel& m, const FeatureVector& x) noexcept {
  return m.decision_value(x);
}
inline int predict(const SvmModel& m, const FeatureVector& x) noexcept { return m.predict(x); }
inline int sign_label(double value) noexcept { return value >= 0.0 ? kPositive : kNegative; }

// Largest violation of the KKT conditions of `model` on its own training
// data, recomputed from the stored dual coefficients. Works for both losses.
double kkt_residual(const SvmModel& model, const LabeledDataset& training, const TrainConfig& cfg);

// Stable JSON schema: {"format":"subsvms-model","version":1,"kernel":{...},
// "bias":b,"degenerate":bool,"slack_norm_sq":x,"support_vectors":[{"index":i,
// "label":y,"alpha":a,"features":[[idx,val],...]}]}.
std::string model_to_json(const SvmModel& model);
SvmModel model_from_json(const std::string& text);

}  // namespace subsvms
