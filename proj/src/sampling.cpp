#include "subsvms/sampling.hpp"

#include "subsvms/error.hpp"
#include "subsvms/rng.hpp"

namespace subsvms {

void SamplerConfig::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("sampling bias p must lie in (0, 1)");
  if (s < 1) throw InvalidArgument("subsample size must be positive");
}

std::vector<std::size_t> p_biased_sample(const ClassStats& stats, const SamplerConfig& cfg) {
  cfg.validate();
  if (stats.minority_indices.empty() || stats.majority_indices.empty())
    throw InvalidArgument("p-biased sampling needs both classes");
  Rng rng(cfg.seed);
  std::vector<std::size_t> out;
  out.reserve(cfg.s);
  for (std::size_t k = 0; k < cfg.s; ++k) {
    const auto& pool = uniform01(rng) < cfg.p ? stats.minority_indices : stats.majority_indices;
    out.push_back(pool[uniform_index(rng, pool.size())]);
  }
  return out;
}

std::vector<std::size_t> p_biased_sample(const LabeledDataset& d, const SamplerConfig& cfg) {
  return p_biased_sample(class_stats(d), cfg);
}

std::vector<std::size_t> bootstrap_sample(std::size_t population, std::size_t size,
                                          std::uint64_t seed) {
  std::vector<std::size_t> out;
  if (size == 0) return out;
  if (population == 0) throw InvalidArgument("cannot bootstrap from an empty set");
  Rng rng(seed);
  out.reserve(size);
  for (std::size_t k = 0; k < size; ++k) out.push_back(uniform_index(rng, population));
  return out;
}

std::pair<double, double> point_probabilities(const ClassStats& stats, double p) {
  return {p / static_cast<double>(stats.minority_count),
          (1.0 - p) / static_cast<double>(stats.majority_count)};
}

}  // namespace subsvms
