#include "subsvms/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <thread>

#include "parallel.hpp"
#include "subsvms/error.hpp"
#include "subsvms/rng.hpp"

namespace subsvms {

std::string to_string(TieRule t) { return t == TieRule::keep_observed ? "observed" : "positive"; }

TieRule tie_rule_from_string(const std::string& name) {
  if (name == "observed" || name == "keep_observed") return TieRule::keep_observed;
  if (name == "positive") return TieRule::positive;
  throw InvalidArgument("unknown tie rule '" + name + "' (expected observed or positive)");
}

std::size_t subsample_size(std::size_t l, SubsampleRule rule) {
  const double lg = std::log(static_cast<double>(std::max<std::size_t>(l, 1)));
  const double s = rule == SubsampleRule::log ? lg : lg * lg;
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(s - 1e-12)));
}

void EnsembleConfig::validate() const {
  if (members == 0) throw InvalidArgument("ensemble needs J >= 1");
  sampler.validate();
  kernel.validate();
  train.validate();
}

std::size_t EnsembleModel::degenerate_count() const {
  return static_cast<std::size_t>(
      std::count_if(members.begin(), members.end(), [](const SvmModel& m) { return m.degenerate; }));
}

namespace {

using detail::parallel_for;

Vote tally(const EnsembleModel& ens, const FeatureVector& x) {
  std::size_t pos = 0;
  for (const auto& m : ens.members) pos += m.predict(x) > 0;
  const std::size_t total = ens.members.size();
  const double frac = total ? static_cast<double>(pos) / static_cast<double>(total) : 0.5;
  int label = 2 * pos > total ? kPositive : (2 * pos < total ? kNegative : 0);
  return {label, frac};
}

}  // namespace

EnsembleModel train_ensemble(const LabeledDataset& noisy, const EnsembleConfig& cfg) {
  cfg.validate();
  const ClassStats stats = class_stats(noisy);
  std::vector<std::optional<SvmModel>> slots(cfg.members);
  parallel_for(cfg.members, cfg.threads, [&](std::size_t j) {
    SamplerConfig sc = cfg.sampler;
    sc.seed = derive_seed(cfg.sampler.seed, j);
    const auto idx = p_biased_sample(stats, sc);
    try {
      slots[j] = train(noisy, idx, cfg.kernel, cfg.train);
    } catch (const ConvergenceError&) {
    }
  });
  EnsembleModel ens;
  ens.config = cfg;
  for (std::size_t j = 0; j < slots.size(); ++j) {
    if (slots[j]) ens.members.push_back(std::move(*slots[j]));
    else ens.skipped.push_back(j);
  }
  if (2 * ens.members.size() < cfg.members)
    throw ConvergenceError("only " + std::to_string(ens.members.size()) + " of " +
                           std::to_string(cfg.members) + " ensemble members converged");
  return ens;
}

std::vector<Vote> predict_votes(const EnsembleModel& ens, std::span<const FeatureVector> xs) {
  std::vector<Vote> out(xs.size());
  const unsigned threads = ens.config.threads;
  const std::size_t chunks = threads > 1 ? threads : 1;
  parallel_for(chunks, threads, [&](std::size_t c) {
    for (std::size_t i = c; i < xs.size(); i += chunks) out[i] = tally(ens, xs[i]);
  });
  return out;
}

Vote predict_vote(const EnsembleModel& ens, const FeatureVector& x) {
  Vote v = tally(ens, x);
  if (v.label == 0) v.label = kPositive;
  return v;
}

CorrectionResult correct(const LabeledDataset& noisy, const EnsembleModel& ens, TieRule tie) {
  auto votes = predict_votes(ens, noisy.features());
  CorrectionResult res;
  std::vector<int> labels(noisy.size());
  res.vote_fraction.resize(noisy.size());
  for (std::size_t i = 0; i < noisy.size(); ++i) {
    int label = votes[i].label;
    if (label == 0) label = tie == TieRule::keep_observed ? noisy.y(i) : kPositive;
    labels[i] = label;
    res.vote_fraction[i] = votes[i].positive_fraction;
    if (label != noisy.y(i)) res.changed.push_back(i);
  }
  res.corrected = noisy.with_labels(std::move(labels));
  return res;
}

RegularityEstimate estimate_regularity(const LabeledDataset& d, std::size_t r, double delta,
                                       std::size_t trials, double sampler_p,
                                       const KernelSpec& kernel, const TrainConfig& train_cfg,
                                       std::uint64_t seed, std::size_t eval_multiplier) {
  if (trials < 20) throw InvalidArgument("regularity estimation needs at least 20 trials");
  if (!(delta > 0.0 && delta < 0.5)) throw InvalidArgument("delta must lie in (0, 0.5)");
  if (r < 1) throw InvalidArgument("r must be positive");
  const ClassStats stats = class_stats(d);
  RegularityEstimate est;
  est.error_rates.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto idx = p_biased_sample(stats, {sampler_p, r, derive_seed(seed, 2 * t)});
    const SvmModel m = train(d, idx, kernel, train_cfg);
    const auto eval = p_biased_sample(
        stats, {sampler_p, eval_multiplier * d.size(), derive_seed(seed, 2 * t + 1)});
    std::size_t wrong = 0;
    for (auto i : eval) wrong += m.predict(d.x(i)) != d.y(i);
    est.error_rates.push_back(static_cast<double>(wrong) / static_cast<double>(eval.size()));
  }
  std::sort(est.error_rates.begin(), est.error_rates.end());
  // Nearest-rank quantile.
  const auto rank = static_cast<std::size_t>(std::ceil((1.0 - delta) * trials - 1e-9));
  est.theta_hat = est.error_rates[std::clamp<std::size_t>(rank, 1, trials) - 1];
  return est;
}

}  // namespace subsvms
