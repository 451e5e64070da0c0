#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subsvms/dataset.hpp"
#include "subsvms/sampling.hpp"
#include "subsvms/svm.hpp"

namespace subsvms {

enum class TieRule { keep_observed, positive };

std::string to_string(TieRule t);
TieRule tie_rule_from_string(const std::string& name);

enum class SubsampleRule { log, log_squared };

// ceil(ln l) or ceil(ln^2 l), at least 2.
std::size_t subsample_size(std::size_t l, SubsampleRule rule);

struct EnsembleConfig {
  std::size_t members = 128;  // J
  SamplerConfig sampler;      // p, s and the master seed
  KernelSpec kernel = KernelSpec::rbf(0.5);
  TrainConfig train;
  TieRule tie_rule = TieRule::keep_observed;
  // Worker threads for member training and prediction; results do not
  // depend on this value.
  unsigned threads = 1;

  void validate() const;
};

struct EnsembleModel {
  std::vector<SvmModel> members;
  // Member ids whose SMO run did not converge.
  std::vector<std::size_t> skipped;
  EnsembleConfig config;

  std::size_t degenerate_count() const;
};

struct Vote {
  int label;
  double positive_fraction;  // share of +1 votes
};

struct CorrectionResult {
  LabeledDataset corrected;
  std::vector<double> vote_fraction;
  std::vector<std::size_t> changed;
};

// Member j draws its subsample with seed derive_seed(master, j).
EnsembleModel train_ensemble(const LabeledDataset& noisy, const EnsembleConfig& cfg);

// Majority label per point; exact ties follow `tie`.
CorrectionResult correct(const LabeledDataset& noisy, const EnsembleModel& ens, TieRule tie);

// Majority vote for an unlabelled point; ties go to +1.
Vote predict_vote(const EnsembleModel& ens, const FeatureVector& x);
std::vector<Vote> predict_votes(const EnsembleModel& ens, std::span<const FeatureVector> xs);

struct RegularityEstimate {
  double theta_hat = 0.0;
  std::vector<double> error_rates;  // one per trial, sorted ascending
};

// Trains `trials` SVMs on r-point p-biased subsamples of d, measures each
// model's error on a fresh draw of eval_multiplier * l points from the same
// distribution, and returns the empirical (1 - delta)-quantile of the rates.
RegularityEstimate estimate_regularity(const LabeledDataset& d, std::size_t r, double delta,
                                       std::size_t trials, double sampler_p,
                                       const KernelSpec& kernel, const TrainConfig& train,
                                       std::uint64_t seed = 0, std::size_t eval_multiplier = 10);

}  // namespace subsvms
