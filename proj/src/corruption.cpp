#include "subsvms/corruption.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "subsvms/error.hpp"
#include "subsvms/rng.hpp"

namespace subsvms {

std::string to_string(FlipConvention c) {
  return c == FlipConvention::appendix ? "appendix" : "experiment";
}

FlipConvention flip_convention_from_string(const std::string& name) {
  if (name == "appendix") return FlipConvention::appendix;
  if (name == "experiment") return FlipConvention::experiment;
  throw InvalidArgument("unknown flip convention '" + name + "'");
}

void CorruptionSpec::validate() const {
  if (!(rho >= 0.0 && rho < 1.0)) throw InvalidArgument("rho must lie in [0, 1)");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in [0, 1]");
}

std::vector<std::size_t> CorruptionReport::flipped_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < flip_mask.size(); ++i)
    if (flip_mask[i]) out.push_back(i);
  return out;
}

namespace {

void pick(std::vector<std::size_t> pool, std::size_t k, Rng& rng, std::vector<bool>& mask) {
  // Partial Fisher-Yates: the first k slots are a uniform k-subset.
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + uniform_index(rng, pool.size() - i);
    std::swap(pool[i], pool[j]);
    mask[pool[i]] = true;
  }
}

}  // namespace

Corrupted corrupt(const LabeledDataset& clean, const CorruptionSpec& spec) {
  spec.validate();
  const ClassStats stats = class_stats(clean);
  const double l = static_cast<double>(clean.size());
  CorruptionReport rep;
  rep.minority_label = stats.minority_label;
  rep.n_flips = static_cast<std::size_t>(std::floor(spec.rho * stats.beta * l));
  const auto rounded = static_cast<std::size_t>(
      std::floor(spec.alpha * static_cast<double>(rep.n_flips) + 0.5));
  if (spec.convention == FlipConvention::appendix) {
    rep.n_b_to_a = rounded;
    rep.n_a_to_b = rep.n_flips - rounded;
  } else {
    rep.n_a_to_b = rounded;
    rep.n_b_to_a = rep.n_flips - rounded;
  }
  if (rep.n_a_to_b > stats.minority_count || rep.n_b_to_a > stats.majority_count)
    throw InfeasibleError("cannot flip " + std::to_string(rep.n_a_to_b) + " of " +
                          std::to_string(stats.minority_count) + " minority and " +
                          std::to_string(rep.n_b_to_a) + " of " +
                          std::to_string(stats.majority_count) + " majority points");
  const std::size_t a_after = stats.minority_count - rep.n_a_to_b + rep.n_b_to_a;
  if (a_after == 0 || a_after == clean.size())
    throw InfeasibleError("corruption would empty a class (" + std::to_string(rep.n_a_to_b) +
                          " A->B, " + std::to_string(rep.n_b_to_a) + " B->A)");

  Rng rng(spec.seed);
  rep.flip_mask.assign(clean.size(), false);
  pick(stats.minority_indices, rep.n_a_to_b, rng, rep.flip_mask);
  pick(stats.majority_indices, rep.n_b_to_a, rng, rep.flip_mask);

  std::vector<int> labels(clean.labels().begin(), clean.labels().end());
  std::size_t a_good = 0, a_bad = 0, b_good = 0, b_bad = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool was_a = labels[i] == stats.minority_label;
    if (rep.flip_mask[i]) {
      labels[i] = -labels[i];
      (was_a ? b_bad : a_bad)++;
    } else {
      (was_a ? a_good : b_good)++;
    }
  }
  rep.realized.a_good = a_good / l;
  rep.realized.a_bad = a_bad / l;
  rep.realized.b_good = b_good / l;
  rep.realized.b_bad = b_bad / l;
  rep.realized.a_hat = (a_good + a_bad) / l;
  rep.realized.b_hat = (b_good + b_bad) / l;
  return {clean.with_labels(std::move(labels)), std::move(rep)};
}

ClassFractions theoretical_fractions(double beta, double rho, double alpha) {
  ClassFractions f;
  f.a_hat = beta + alpha * rho * beta - (1.0 - alpha) * rho * beta;
  f.b_hat = 1.0 - f.a_hat;
  f.a_good = beta - (1.0 - alpha) * rho * beta;
  f.a_bad = alpha * rho * beta;
  f.b_good = 1.0 - beta - alpha * rho * beta;
  f.b_bad = (1.0 - alpha) * rho * beta;
  return f;
}

LabeledDataset apply_flip_mask(const LabeledDataset& d, const std::vector<bool>& mask) {
  if (mask.size() != d.size()) throw InvalidArgument("flip mask length mismatch");
  std::vector<int> labels(d.labels().begin(), d.labels().end());
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (mask[i]) labels[i] = -labels[i];
  return d.with_labels(std::move(labels));
}

std::string report_to_json(const CorruptionReport& r, const CorruptionSpec& spec) {
  nlohmann::json j = {
      {"rho", spec.rho},
      {"alpha", spec.alpha},
      {"seed", spec.seed},
      {"flip_convention", to_string(spec.convention)},
      {"minority_label", r.minority_label},
      {"n_c", r.n_flips},
      {"n_BtoA", r.n_b_to_a},
      {"n_AtoB", r.n_a_to_b},
      {"flipped_indices", r.flipped_indices()},
      {"realized",
       {{"A_hat", r.realized.a_hat},
        {"B_hat", r.realized.b_hat},
        {"A_good", r.realized.a_good},
        {"A_bad", r.realized.a_bad},
        {"B_good", r.realized.b_good},
        {"B_bad", r.realized.b_bad}}}};
  return j.dump(2);
}

}  // namespace subsvms
