#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subsvms/dataset.hpp"

namespace subsvms {

// appendix: alpha is the share of flips moving majority (B) points into the
//           minority class (A).
// experiment: alpha is the share of flips drawn from the minority class.
enum class FlipConvention { appendix, experiment };

std::string to_string(FlipConvention c);
FlipConvention flip_convention_from_string(const std::string& name);

struct CorruptionSpec {
  double rho = 0.0;
  double alpha = 0.5;
  std::uint64_t seed = 0;
  FlipConvention convention = FlipConvention::appendix;

  void validate() const;
};

// Class masses as fractions of l. A is the minority class of the clean data.
struct ClassFractions {
  double a_hat = 0.0;
  double b_hat = 0.0;
  double a_good = 0.0;
  double a_bad = 0.0;
  double b_good = 0.0;
  double b_bad = 0.0;
};

struct CorruptionReport {
  int minority_label = kPositive;  // class A
  std::size_t n_flips = 0;
  std::size_t n_b_to_a = 0;
  std::size_t n_a_to_b = 0;
  std::vector<bool> flip_mask;
  ClassFractions realized;

  std::vector<std::size_t> flipped_indices() const;
};

struct Corrupted {
  LabeledDataset data;
  CorruptionReport report;
};

// n_flips = floor(rho * beta * l); the B->A share is floor(alpha * n + 0.5)
// under the appendix convention.
Corrupted corrupt(const LabeledDataset& clean, const CorruptionSpec& spec);

ClassFractions theoretical_fractions(double beta, double rho, double alpha);

LabeledDataset apply_flip_mask(const LabeledDataset& d, const std::vector<bool>& mask);

std::string report_to_json(const CorruptionReport& report, const CorruptionSpec& spec);

}  // namespace subsvms
