#include "subsvms/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "subsvms/error.hpp"

namespace subsvms {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kFullGramLimit = 4096;
constexpr double kTau = 1e-12;

// Kernel matrix over the training points: dense for small problems, row
// recomputation otherwise.
class KernelMatrix {
 public:
  KernelMatrix(std::span<const FeatureVector* const> xs, const KernelSpec& kernel)
      : xs_(xs), kernel_(kernel), n_(xs.size()) {
    diag_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) diag_[i] = kernel_(*xs_[i], *xs_[i]);
    if (n_ <= kFullGramLimit) {
      full_.resize(n_ * n_);
      for (std::size_t i = 0; i < n_; ++i) {
        full_[i * n_ + i] = diag_[i];
        for (std::size_t j = i + 1; j < n_; ++j)
          full_[i * n_ + j] = full_[j * n_ + i] = kernel_(*xs_[i], *xs_[j]);
      }
    }
  }

  double diag(std::size_t i) const { return diag_[i]; }

  // Row i; the span stays valid until the next call with slot `slot`.
  std::span<const double> row(std::size_t i, int slot) {
    if (!full_.empty()) return {full_.data() + i * n_, n_};
    auto& buf = rows_[slot];
    auto& cached = cached_[slot];
    if (cached != i || buf.size() != n_) {
      buf.resize(n_);
      for (std::size_t k = 0; k < n_; ++k) buf[k] = kernel_(*xs_[i], *xs_[k]);
      cached = i;
    }
    return buf;
  }

 private:
  std::span<const FeatureVector* const> xs_;
  KernelSpec kernel_;
  std::size_t n_;
  std::vector<double> diag_;
  std::vector<double> full_;
  std::vector<double> rows_[2];
  std::size_t cached_[2] = {static_cast<std::size_t>(-1), static_cast<std::size_t>(-1)};
};

struct Problem {
  std::vector<const FeatureVector*> xs;
  std::vector<int> y;
};

// Dual: min 1/2 a'Qa - e'a, 0 <= a_i <= u_i, y'a = 0, with
// Q_ij = y_i y_j (K_ij + [i == j] s_i). L1: u_i = C_i, s_i = 0.
// L2: u_i = inf, s_i = 1 / (k C_i), k = l2_shift_divisor.
class SmoSolver {
 public:
  SmoSolver(const Problem& p, const KernelSpec& kernel, const TrainConfig& cfg)
      : y_(p.y), n_(p.y.size()), kernel_matrix_(p.xs, kernel), cfg_(cfg) {
    upper_.resize(n_);
    shift_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      double ci = cfg.penalty(y_[i]);
      if (cfg.loss == Loss::l1) {
        upper_[i] = ci;
        shift_[i] = 0.0;
      } else {
        upper_[i] = kInf;
        shift_[i] = cfg.l2_shift(y_[i]);
      }
    }
    alpha_.assign(n_, 0.0);
    grad_.assign(n_, -1.0);
  }

  void solve(const ObjectiveObserver& observer) {
    double tol = cfg_.tolerance;
    for (;;) {
      auto [i, j, violation] = select_pair();
      if (violation < tol) {
        if (gap_ok()) {
          violation_ = std::max(violation, 0.0);
          return;
        }
        tol = std::max(violation / 2.0, 1e-14);
        continue;
      }
      if (iterations_ >= cfg_.max_passes)
        throw ConvergenceError("SMO did not converge within " + std::to_string(cfg_.max_passes) +
                               " iterations (KKT violation " + std::to_string(violation) + ")");
      step(i, j);
      ++iterations_;
      if (observer) observer(dual_objective());
    }
  }

  std::span<const double> alpha() const { return alpha_; }
  std::size_t iterations() const { return iterations_; }
  double violation() const { return violation_; }

  double bias() const {
    double ub = kInf, lb = -kInf, sum_free = 0.0;
    std::size_t n_free = 0;
    for (std::size_t t = 0; t < n_; ++t) {
      double yg = y_[t] * grad_[t];
      if (at_lower(t)) {
        if (y_[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
      } else if (at_upper(t)) {
        if (y_[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
      } else {
        ++n_free;
        sum_free += yg;
      }
    }
    double rho = n_free ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;
    return -rho;
  }

  // y_i f(x_i) - b for every training point (unshifted kernel).
  std::vector<double> margins_without_bias() const {
    std::vector<double> m(n_);
    for (std::size_t t = 0; t < n_; ++t) m[t] = grad_[t] + 1.0 - alpha_[t] * shift_[t];
    return m;
  }

  double dual_objective() const {
    double v = 0.0;
    for (std::size_t t = 0; t < n_; ++t) v += alpha_[t] - 0.5 * alpha_[t] * (grad_[t] + 1.0);
    return v;
  }

  double primal_objective(double b) const {
    double wnorm = 0.0, penalty = 0.0;
    for (std::size_t t = 0; t < n_; ++t) {
      double qa = grad_[t] + 1.0 - alpha_[t] * shift_[t];
      wnorm += alpha_[t] * qa;
      double xi = std::max(0.0, 1.0 - (qa + y_[t] * b));
      double ci = cfg_.penalty(y_[t]);
      penalty += cfg_.loss == Loss::l1 ? ci * xi : xi * xi / (2.0 * cfg_.l2_shift(y_[t]));
    }
    return 0.5 * wnorm + penalty;
  }

 private:
  bool at_upper(std::size_t t) const { return alpha_[t] >= upper_[t]; }
  bool at_lower(std::size_t t) const { return alpha_[t] <= 0.0; }
  bool in_up(std::size_t t) const { return y_[t] > 0 ? !at_upper(t) : !at_lower(t); }
  bool in_low(std::size_t t) const { return y_[t] > 0 ? !at_lower(t) : !at_upper(t); }

  struct Pair {
    std::size_t i, j;
    double violation;
  };

  Pair select_pair() const {
    double gmax = -kInf, gmin = kInf;
    std::size_t i = 0, j = 0;
    for (std::size_t t = 0; t < n_; ++t) {
      double v = -y_[t] * grad_[t];
      if (in_up(t) && v > gmax) {
        gmax = v;
        i = t;
      }
      if (in_low(t) && v < gmin) {
        gmin = v;
        j = t;
      }
    }
    return {i, j, gmax - gmin};
  }

  bool gap_ok() const {
    double dual = dual_objective();
    double gap = primal_objective(bias()) - dual;
    return gap <= std::max(1e-6, 1e-3 * std::abs(dual));
  }

  void step(std::size_t i, std::size_t j) {
    auto ki = kernel_matrix_.row(i, 0);
    auto kj = kernel_matrix_.row(j, 1);
    const double yi = y_[i], yj = y_[j];
    const double qii = kernel_matrix_.diag(i) + shift_[i];
    const double qjj = kernel_matrix_.diag(j) + shift_[j];
    const double kij = ki[j];
    const double ui = upper_[i], uj = upper_[j];
    const double old_i = alpha_[i], old_j = alpha_[j];
    double ai = old_i, aj = old_j;

    if (yi != yj) {
      double quad = std::max(qii + qjj - 2.0 * kij, kTau);
      double delta = (-grad_[i] - grad_[j]) / quad;
      double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0) {
        if (aj < 0) { aj = 0; ai = diff; }
      } else {
        if (ai < 0) { ai = 0; aj = -diff; }
      }
      if (std::isfinite(ui) || std::isfinite(uj)) {
        if (diff > ui - uj) {
          if (ai > ui) { ai = ui; aj = ui - diff; }
        } else {
          if (aj > uj) { aj = uj; ai = uj + diff; }
        }
      }
    } else {
      double quad = std::max(qii + qjj - 2.0 * kij, kTau);
      double delta = (grad_[i] - grad_[j]) / quad;
      double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > ui) {
        if (ai > ui) { ai = ui; aj = sum - ui; }
      } else {
        if (aj < 0) { aj = 0; ai = sum; }
      }
      if (sum > uj) {
        if (aj > uj) { aj = uj; ai = sum - uj; }
      } else {
        if (ai < 0) { ai = 0; aj = sum; }
      }
    }

    alpha_[i] = ai;
    alpha_[j] = aj;
    const double di = ai - old_i, dj = aj - old_j;
    for (std::size_t t = 0; t < n_; ++t)
      grad_[t] += y_[t] * (yi * ki[t] * di + yj * kj[t] * dj);
    grad_[i] += shift_[i] * di;
    grad_[j] += shift_[j] * dj;
  }

  std::span<const int> y_;
  std::size_t n_;
  KernelMatrix kernel_matrix_;
  const TrainConfig& cfg_;
  std::vector<double> alpha_, grad_, upper_, shift_;
  std::size_t iterations_ = 0;
  double violation_ = 0.0;
};

SvmModel constant_model(int label, const KernelSpec& kernel) {
  SvmModel m;
  m.kernel = kernel;
  m.bias = static_cast<double>(label);
  m.degenerate = true;
  return m;
}

SvmModel train_problem(const Problem& p, const KernelSpec& kernel, const TrainConfig& cfg,
                       const ObjectiveObserver& observer) {
  kernel.validate();
  cfg.validate();
  if (p.y.empty()) throw InvalidArgument("cannot train on an empty set");
  bool has_pos = std::find(p.y.begin(), p.y.end(), kPositive) != p.y.end();
  bool has_neg = std::find(p.y.begin(), p.y.end(), kNegative) != p.y.end();
  if (!has_pos || !has_neg) return constant_model(has_pos ? kPositive : kNegative, kernel);

  SmoSolver solver(p, kernel, cfg);
  solver.solve(observer);

  SvmModel m;
  m.kernel = kernel;
  m.bias = solver.bias();
  m.iterations = solver.iterations();
  m.kkt_violation = solver.violation();
  m.dual_objective = solver.dual_objective();
  m.primal_objective = solver.primal_objective(m.bias);
  auto alpha = solver.alpha();
  auto margins = solver.margins_without_bias();
  for (std::size_t t = 0; t < alpha.size(); ++t) {
    double xi = std::max(0.0, 1.0 - (margins[t] + p.y[t] * m.bias));
    m.slack_norm_sq += xi * xi;
    if (alpha[t] > 0.0) m.support_vectors.push_back({t, *p.xs[t], p.y[t], alpha[t]});
  }
  return m;
}

}  // namespace

std::string to_string(Loss loss) { return loss == Loss::l1 ? "l1" : "l2"; }

Loss loss_from_string(const std::string& name) {
  if (name == "l1" || name == "L1") return Loss::l1;
  if (name == "l2" || name == "L2") return Loss::l2;
  throw InvalidArgument("unknown loss '" + name + "' (expected l1 or l2)");
}

void TrainConfig::validate() const {
  if (!(C > 0.0) || !std::isfinite(C)) throw InvalidArgument("C must be > 0");
  if (!(class_weight_ratio > 0.0) || !std::isfinite(class_weight_ratio))
    throw InvalidArgument("class weight ratio must be > 0");
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be > 0");
  if (!(l2_shift_divisor > 0.0) || !std::isfinite(l2_shift_divisor))
    throw InvalidArgument("L2 shift divisor must be > 0");
}

double SvmModel::decision_value(const FeatureVector& x) const noexcept {
  double f = bias;
  for (const auto& sv : support_vectors) f += sv.alpha * sv.label * kernel(sv.x, x);
  return f;
}

int SvmModel::predict(const FeatureVector& x) const noexcept { return sign_label(decision_value(x)); }

double SvmModel::weight_norm_sq() const noexcept {
  double w = 0.0;
  for (const auto& a : support_vectors)
    for (const auto& b : support_vectors)
      w += a.alpha * b.alpha * a.label * b.label * kernel(a.x, b.x);
  return w;
}

double SvmModel::geometric_margin() const noexcept {
  double w = weight_norm_sq();
  return w > 0.0 ? 1.0 / std::sqrt(w) : kInf;
}

SvmModel train(const LabeledDataset& data, const KernelSpec& kernel, const TrainConfig& cfg,
               const ObjectiveObserver& observer) {
  Problem p;
  p.xs.reserve(data.size());
  for (const auto& x : data.features()) p.xs.push_back(&x);
  p.y.assign(data.labels().begin(), data.labels().end());
  return train_problem(p, kernel, cfg, observer);
}

SvmModel train(const LabeledDataset& data, std::span<const std::size_t> indices,
               const KernelSpec& kernel, const TrainConfig& cfg, const ObjectiveObserver& observer) {
  Problem p;
  p.xs.reserve(indices.size());
  p.y.reserve(indices.size());
  for (auto i : indices) {
    p.xs.push_back(&data.x(i));
    p.y.push_back(data.y(i));
  }
  return train_problem(p, kernel, cfg, observer);
}

double kkt_residual(const SvmModel& model, const LabeledDataset& training, const TrainConfig& cfg) {
  if (model.degenerate) return 0.0;
  std::vector<double> alpha(training.size(), 0.0);
  for (const auto& sv : model.support_vectors) alpha.at(sv.index) = sv.alpha;
  double worst = 0.0;
  double balance = 0.0;
  for (std::size_t i = 0; i < training.size(); ++i) {
    const int y = training.y(i);
    const double ci = cfg.penalty(y);
    double m = y * model.decision_value(training.x(i));
    if (cfg.loss == Loss::l2) m += alpha[i] * cfg.l2_shift(y);
    balance += alpha[i] * y;
    double v = 0.0;
    if (alpha[i] <= 0.0) {
      v = std::max(0.0, 1.0 - m);
    } else if (cfg.loss == Loss::l1 && alpha[i] >= ci) {
      v = std::max(0.0, m - 1.0);
    } else {
      v = std::abs(m - 1.0);
    }
    worst = std::max(worst, v);
  }
  return std::max(worst, std::abs(balance));
}

}  // namespace subsvms
