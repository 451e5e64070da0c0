#pragma once

#include <cstddef>

namespace subsvms::bounds {

// Symbols shared by the error-correction bounds. Logs are natural
// throughout; c is the unnamed constant of the 2-norm soft-margin bound.
struct BoundsInput {
  std::size_t r = 10;
  double delta = 0.1;
  double theta = 0.1;
  double rho = 0.75;
  double beta = 0.25;
  double alpha = 0.5;
  std::size_t s = 48;
  double p = 0.5;
  double R = 1.0;
  double gamma = 1.0;
  double c = 1.0;
  std::size_t J = 128;
  double slack_norm_sq = 0.0;

  double p_star() const noexcept { return p < 1.0 - p ? p : 1.0 - p; }
  void validate() const;
};

// (c / l) ((R^2 + ||xi||^2) / gamma^2 log^2 l + log(1 / delta)).
double generalization_bound(double l, double R, double gamma, double slack_norm_sq,
                            double delta, double c);

struct EpsilonBound {
  double full;              // slack ||xi||^2 = 4 R^2 (s - r)
  double regularity_split;  // theta + (c / s)(4 R^2 (s - r) / gamma^2) log^2 s
  bool vacuous() const noexcept { return full > 1.0; }
};
EpsilonBound epsilon_bound(const BoundsInput& in);

// eps / min(p, 1 - p).
double translate_error_rate(double eps, double p);

struct Probability {
  double value;  // unclamped
  double clamped() const noexcept { return value < 0.0 ? 0.0 : (value > 1.0 ? 1.0 : value); }
  bool vacuous() const noexcept { return value > 1.0; }
};

// (1 - eta - delta)(eps / p* + rho beta) + eta + delta.
Probability phi(double eps, double p, double rho, double beta, double eta, double delta);

struct VoteBound {
  double value;     // exp(-2 J (0.5 - phi)^2), or 1 when phi >= 0.5
  bool applicable;  // phi < 0.5
};
VoteBound vote_error_bound(double phi, std::size_t J);

struct Budget {
  // 1 - 2 theta - [1 / (2 (1 - eta - delta)) + 4 R^2 c (s - r) log^2 s / (gamma^2 s)]
  double as_printed;
  // 1 - eps / p* - 1 / (2 (1 - eta - delta)), eps the full epsilon bound.
  double from_derivation;
  bool tolerates_errors() const noexcept { return as_printed > 0.0; }
};
Budget rho_beta_budget(const BoundsInput& in, double eta);
// Same, with s replaced by ceil(s_min_main(r)).
Budget rho_beta_budget_subbagging(const BoundsInput& in, double eta);

struct CleanProbs {
  double a_good;  // probability one draw is a clean minority point
  double b_good;  // probability one draw is a clean majority point
};
CleanProbs clean_point_probs(double beta, double rho, double alpha, double p);
// Minimum over alpha and beta: (p / (1 + rho), (1 - p) / (1 + rho)).
CleanProbs worst_case_clean_probs(double rho, double p);

// Lower-tail count used by the eta sums: ceil(r / 2) - 1.
std::size_t eta_tail_limit(std::size_t r);

// Binomial lower tail sum_{k <= ceil(r/2)-1} C(s,k) q^k (1-q)^(s-k).
double binomial_lower_tail(std::size_t s, std::size_t k_max, double q);

// Sum of the two class tails; can exceed 1.
Probability eta_exact(std::size_t s, std::size_t r, double q_a, double q_b);

struct HoeffdingEta {
  bool applicable = false;  // s q > ceil(r/2) - 1 for both worst-case q
  double value = 1.0;       // one-sided Hoeffding tail per class, summed
  double as_printed = 1.0;  // the same with a factor 1/2 on each term
};
HoeffdingEta eta_hoeffding(std::size_t s, std::size_t r, double rho, double p);

// Gaussian-sum form f(p) of the printed Hoeffding expression.
double eta_surrogate(double p, std::size_t s, std::size_t r, double rho);
// f(p) where the Hoeffding preconditions hold, 1 elsewhere.
double worst_case_eta_bound(double p, std::size_t s, std::size_t r, double rho);

// s >= 2r + 4 (r log 2 + log^2 2 - log 4)^(1/2) + log 16 - 4.
double s_min_main(std::size_t r);
// Global-minimum condition at p = 0.5.
double s_min_appendix(std::size_t r, double rho);
// Local-minimum (second derivative) condition at p = 0.5.
double s_min_hessian(std::size_t r, double rho);
// Hoeffding applicability at p = 0.5: (1 + rho)(r - 2).
double s_min_hoeffding(std::size_t r, double rho);

}  // namespace subsvms::bounds
