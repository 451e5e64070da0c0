#pragma once

#include <cstdint>
#include <vector>

#include "subsvms/dataset.hpp"

namespace subsvms {

struct SamplerConfig {
  double p = 0.5;  // probability of drawing from the minority class
  std::size_t s = 2;
  std::uint64_t seed = 0;

  void validate() const;
};

// s iid draws: pick the minority class of `d` (by class_stats, +1 on ties)
// with probability p, else the majority class, then a uniform point of that
// class. Draws are with replacement.
std::vector<std::size_t> p_biased_sample(const LabeledDataset& d, const SamplerConfig& cfg);
std::vector<std::size_t> p_biased_sample(const ClassStats& stats, const SamplerConfig& cfg);

// Uniform with replacement over all points.
std::vector<std::size_t> bootstrap_sample(std::size_t population, std::size_t size,
                                          std::uint64_t seed);

// Probability that one p-biased draw selects a given point of the minority
// (first) or majority (second) class.
std::pair<double, double> point_probabilities(const ClassStats& stats, double p);

}  // namespace subsvms
