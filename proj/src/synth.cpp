#include "subsvms/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "subsvms/error.hpp"
#include "subsvms/rng.hpp"

namespace subsvms {

std::size_t SynthSpec::minority_count() const {
  return static_cast<std::size_t>(std::llround(beta * static_cast<double>(count)));
}

void SynthSpec::validate() const {
  if (dimension == 0) throw InvalidArgument("dimension must be positive");
  if (count < 2) throw InvalidArgument("need at least 2 points");
  if (!(beta > 0.0 && beta <= 0.5)) throw InvalidArgument("beta must lie in (0, 0.5]");
  if (!(covariance_scale > 0.0)) throw InvalidArgument("covariance scale must be > 0");
  if (!(enforced_margin >= 0.0 && enforced_margin < mean_distance))
    throw InvalidArgument("enforced margin must lie in [0, mean_distance)");
  if (minority_count() == 0) throw InvalidArgument("beta * count rounds to zero minority points");
}

LabeledDataset generate(const SynthSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const std::size_t minority = spec.minority_count();
  std::vector<int> labels(spec.count, kNegative);
  std::fill_n(labels.begin(), minority, kPositive);
  std::shuffle(labels.begin(), labels.end(), rng);

  std::normal_distribution<double> noise(0.0, std::sqrt(spec.covariance_scale));
  const double half_band = spec.enforced_margin / 2.0;
  const double offset = spec.mean_distance / 2.0;
  const bool reject = spec.enforced_margin > 0.0;

  std::vector<FeatureVector> xs;
  xs.reserve(spec.count);
  std::vector<double> coords(spec.dimension);
  std::size_t attempts = 0, accepted = 0;
  for (int y : labels) {
    for (;;) {
      ++attempts;
      for (auto& c : coords) c = noise(rng);
      coords[0] += y * offset;
      if (!reject || y * coords[0] >= half_band) break;
      if (attempts >= 10'000 && accepted * 1000 < attempts)
        throw InfeasibleError("synthetic spec rejects more than 99.9% of draws");
    }
    ++accepted;
    xs.push_back(FeatureVector::dense(coords));
  }
  return LabeledDataset(std::move(xs), std::move(labels), spec.dimension);
}

}  // namespace subsvms
