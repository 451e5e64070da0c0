#pragma once

#include <string>

namespace subsvms {

class FeatureVector;

enum class KernelKind { linear, rbf };

// RBF convention: K(x, z) = exp(-||x - z||^2 / (2 sigma_sq)).
struct KernelSpec {
  KernelKind kind = KernelKind::linear;
  double sigma_sq = 1.0;

  static KernelSpec linear() { return {KernelKind::linear, 1.0}; }
  static KernelSpec rbf(double sigma_sq);
  // exp(-gamma ||x - z||^2), i.e. sigma_sq = 1 / (2 gamma).
  static KernelSpec rbf_gamma(double gamma);

  double gamma() const noexcept { return 1.0 / (2.0 * sigma_sq); }
  double operator()(const FeatureVector& a, const FeatureVector& b) const noexcept;
  void validate() const;
  bool operator==(const KernelSpec&) const = default;
};

std::string to_string(KernelKind kind);
KernelKind kernel_kind_from_string(const std::string& name);

}  // namespace subsvms
