#pragma once

#include <cstdint>

#include "subsvms/dataset.hpp"

namespace subsvms {

// Two isotropic Gaussians with means at +-(mean_distance / 2) e_1. Points
// inside the band |x_1| < enforced_margin / 2, or on the wrong side of
// x_1 = 0, are rejected and redrawn. The minority class is +1.
struct SynthSpec {
  std::uint32_t dimension = 2;
  std::size_t count = 1000;
  double beta = 0.5;
  double mean_distance = 2.0;
  double covariance_scale = 0.1;
  double enforced_margin = 0.2;
  std::uint64_t seed = 0;

  std::size_t minority_count() const;
  void validate() const;
};

LabeledDataset generate(const SynthSpec& spec);

}  // namespace subsvms
