#include <cmath>

#include "subsvms/dataset.hpp"
#include "subsvms/error.hpp"
#include "subsvms/svm.hpp"

namespace subsvms {

double estimate_margin(const LabeledDataset& d, const KernelSpec& kernel) {
  class_stats(d);  // both classes required
  TrainConfig cfg;
  cfg.loss = Loss::l1;
  cfg.C = 1e8;
  cfg.tolerance = 1e-7;
  cfg.max_passes = 2'000'000;
  SvmModel m;
  try {
    m = train(d, kernel, cfg);
  } catch (const ConvergenceError&) {
    throw NonSeparableError("hard-margin training did not converge; data looks non-separable");
  }
  for (const auto& sv : m.support_vectors)
    if (sv.alpha >= cfg.C) throw NonSeparableError("hard-margin solution has bounded multipliers");
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d.y(i) * m.decision_value(d.x(i)) <= 0.0)
      throw NonSeparableError("hard-margin solution misclassifies a training point");
  return m.geometric_margin();
}

}  // namespace subsvms
