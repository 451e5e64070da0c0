#include "subsvms/kernel.hpp"

#include <cmath>

#include "subsvms/dataset.hpp"
#include "subsvms/error.hpp"

namespace subsvms {

KernelSpec KernelSpec::rbf(double sigma_sq) {
  KernelSpec k{KernelKind::rbf, sigma_sq};
  k.validate();
  return k;
}

KernelSpec KernelSpec::rbf_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("rbf gamma must be > 0");
  return rbf(1.0 / (2.0 * gamma));
}

double KernelSpec::operator()(const FeatureVector& a, const FeatureVector& b) const noexcept {
  if (kind == KernelKind::linear) return dot(a, b);
  return std::exp(-squared_distance(a, b) / (2.0 * sigma_sq));
}

void KernelSpec::validate() const {
  if (kind == KernelKind::rbf && !(sigma_sq > 0.0 && std::isfinite(sigma_sq)))
    throw InvalidArgument("rbf sigma_sq must be > 0");
}

std::string to_string(KernelKind kind) { return kind == KernelKind::linear ? "linear" : "rbf"; }

KernelKind kernel_kind_from_string(const std::string& name) {
  if (name == "linear") return KernelKind::linear;
  if (name == "rbf") return KernelKind::rbf;
  throw InvalidArgument("unknown kernel '" + name + "' (expected linear or rbf)");
}

}  // namespace subsvms
