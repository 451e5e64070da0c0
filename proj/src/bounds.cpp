#include "subsvms/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "subsvms/error.hpp"

namespace subsvms::bounds {

namespace {

const double kLog2 = std::log(2.0);

double sq(double x) { return x * x; }

double checked_sqrt(double x, const char* what) {
  if (x < 0.0) throw InvalidArgument(std::string(what) + ": r too small for a real square root");
  return std::sqrt(x);
}

}  // namespace

void BoundsInput::validate() const {
  if (r == 0 || s == 0 || J == 0) throw InvalidArgument("r, s and J must be positive");
  if (!(delta > 0.0 && delta < 0.5)) throw InvalidArgument("delta must lie in (0, 0.5)");
  if (!(theta >= 0.0 && theta < 0.5)) throw InvalidArgument("theta must lie in [0, 0.5)");
  if (!(rho >= 0.0 && rho < 1.0)) throw InvalidArgument("rho must lie in [0, 1)");
  if (!(beta > 0.0 && beta <= 0.5)) throw InvalidArgument("beta must lie in (0, 0.5]");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in [0, 1]");
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("p must lie in (0, 1)");
  if (!(R > 0.0 && gamma > 0.0 && c > 0.0)) throw InvalidArgument("R, gamma and c must be > 0");
  if (!(slack_norm_sq >= 0.0)) throw InvalidArgument("slack norm must be >= 0");
}

double generalization_bound(double l, double R, double gamma, double slack_norm_sq,
                            double delta, double c) {
  const double lg = std::log(l);
  return (c / l) * ((R * R + slack_norm_sq) / (gamma * gamma) * lg * lg + std::log(1.0 / delta));
}

EpsilonBound epsilon_bound(const BoundsInput& in) {
  if (in.s < in.r) throw InvalidArgument("epsilon bound needs s >= r");
  const double s = static_cast<double>(in.s);
  const double slack = 4.0 * in.R * in.R * static_cast<double>(in.s - in.r);
  const double lg2 = sq(std::log(s));
  EpsilonBound e;
  e.full = generalization_bound(s, in.R, in.gamma, slack, in.delta, in.c);
  e.regularity_split = in.theta + (in.c / s) * (slack / sq(in.gamma)) * lg2;
  return e;
}

double translate_error_rate(double eps, double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("p must lie in (0, 1)");
  return eps / std::min(p, 1.0 - p);
}

Probability phi(double eps, double p, double rho, double beta, double eta, double delta) {
  const double fail = eta + delta;
  return {(1.0 - fail) * (translate_error_rate(eps, p) + rho * beta) + fail};
}

VoteBound vote_error_bound(double phi, std::size_t J) {
  if (!(phi < 0.5)) return {1.0, false};
  return {std::exp(-2.0 * static_cast<double>(J) * sq(0.5 - phi)), true};
}

Budget rho_beta_budget(const BoundsInput& in, double eta) {
  if (in.s < in.r) throw InvalidArgument("budget needs s >= r");
  const double s = static_cast<double>(in.s);
  const double fail = 1.0 - eta - in.delta;
  const double bracket_fail = fail > 0.0 ? 1.0 / (2.0 * fail)
                                         : std::numeric_limits<double>::infinity();
  const double slack_term = 4.0 * in.R * in.R * in.c * static_cast<double>(in.s - in.r) *
                            sq(std::log(s)) / (sq(in.gamma) * s);
  Budget b;
  b.as_printed = 1.0 - 2.0 * in.theta - (bracket_fail + slack_term);
  b.from_derivation = 1.0 - epsilon_bound(in).full / in.p_star() - bracket_fail;
  return b;
}

Budget rho_beta_budget_subbagging(const BoundsInput& in, double eta) {
  BoundsInput at = in;
  at.s = static_cast<std::size_t>(std::ceil(s_min_main(in.r)));
  return rho_beta_budget(at, eta);
}

CleanProbs clean_point_probs(double beta, double rho, double alpha, double p) {
  const double a = (1.0 - (1.0 - alpha) * rho) / (1.0 + alpha * rho - (1.0 - alpha) * rho);
  const double bg = 1.0 - beta - alpha * rho * beta;
  const double b = bg / (bg + (1.0 - alpha) * rho * beta);
  return {p * a, (1.0 - p) * b};
}

CleanProbs worst_case_clean_probs(double rho, double p) {
  return {p / (1.0 + rho), (1.0 - p) / (1.0 + rho)};
}

std::size_t eta_tail_limit(std::size_t r) { return (r + 1) / 2 - 1; }

double binomial_lower_tail(std::size_t s, std::size_t k_max, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("probability must lie in [0, 1]");
  if (k_max >= s) return 1.0;
  if (q == 0.0) return 1.0;
  if (q == 1.0) return 0.0;
  const double lq = std::log(q), lnq = std::log1p(-q);
  const double sd = static_cast<double>(s);
  double choose = 1.0;  // exact while below 2^53
  double total = 0.0;
  for (std::size_t k = 0; k <= k_max; ++k) {
    const double kd = static_cast<double>(k);
    if (k > 0) choose = choose * (sd - kd + 1.0) / kd;
    const double log_term = std::lgamma(sd + 1.0) - std::lgamma(kd + 1.0) -
                            std::lgamma(sd - kd + 1.0) + kd * lq + (sd - kd) * lnq;
    if (choose < 0x1.0p53 && log_term > -700.0)
      total += choose * std::pow(q, kd) * std::pow(1.0 - q, sd - kd);
    else
      total += std::exp(log_term);
  }
  return total;
}

Probability eta_exact(std::size_t s, std::size_t r, double q_a, double q_b) {
  const std::size_t k_max = eta_tail_limit(r);
  if (r < 2) return {0.0};
  return {binomial_lower_tail(s, k_max, q_a) + binomial_lower_tail(s, k_max, q_b)};
}

HoeffdingEta eta_hoeffding(std::size_t s, std::size_t r, double rho, double p) {
  HoeffdingEta h;
  const double sd = static_cast<double>(s);
  const double limit = static_cast<double>(eta_tail_limit(r));
  const auto q = worst_case_clean_probs(rho, p);
  const double ta = sd * q.a_good - limit;
  const double tb = sd * q.b_good - limit;
  if (!(ta > 0.0 && tb > 0.0)) return h;
  h.applicable = true;
  const double ea = std::exp(-2.0 / sd * ta * ta);
  const double eb = std::exp(-2.0 / sd * tb * tb);
  h.value = ea + eb;
  h.as_printed = 0.5 * ea + 0.5 * eb;
  return h;
}

double eta_surrogate(double p, std::size_t s, std::size_t r, double rho) {
  const double sd = static_cast<double>(s);
  const double twice_limit = 2.0 * static_cast<double>(eta_tail_limit(r));
  const double mu = twice_limit * (1.0 + rho) / (2.0 * sd);
  const double sigma = (1.0 + rho) / (2.0 * std::sqrt(sd));
  return 0.5 * std::exp(-0.5 * sq((p - mu) / sigma)) +
         0.5 * std::exp(-0.5 * sq(((1.0 - p) - mu) / sigma));
}

double worst_case_eta_bound(double p, std::size_t s, std::size_t r, double rho) {
  if (!eta_hoeffding(s, r, rho, p).applicable) return 1.0;
  return std::min(1.0, eta_surrogate(p, s, r, rho));
}

double s_min_main(std::size_t r) {
  const double rd = static_cast<double>(r);
  return 2.0 * rd +
         4.0 * checked_sqrt(rd * kLog2 + kLog2 * kLog2 - std::log(4.0), "s_min_main") +
         std::log(16.0) - 4.0;
}

double s_min_appendix(std::size_t r, double rho) {
  const double rd = static_cast<double>(r);
  const double inner = kLog2 * (kLog2 + 2.0 * rd + rho * kLog2 - 4.0) / (rho + 1.0);
  return (rho + 1.0) *
         (rd - 2.0 + (rho + 1.0) * (kLog2 + checked_sqrt(inner, "s_min_appendix")));
}

double s_min_hessian(std::size_t r, double rho) {
  const double rd = static_cast<double>(r);
  const double inner = (4.0 * rd + rho - 7.0) / (rho + 1.0);
  return (rho + 1.0) *
         (rd - 2.0 + 0.5 * (rho + 1.0) * (1.0 + checked_sqrt(inner, "s_min_hessian")));
}

double s_min_hoeffding(std::size_t r, double rho) {
  return (1.0 + rho) * (static_cast<double>(r) - 2.0);
}

}  // namespace subsvms::bounds
