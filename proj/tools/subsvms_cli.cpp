// subsvms command-line front end.

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "subsvms/bounds.hpp"
#include "subsvms/corruption.hpp"
#include "subsvms/dataset.hpp"
#include "subsvms/ensemble.hpp"
#include "subsvms/error.hpp"
#include "subsvms/experiment.hpp"
#include "subsvms/metrics.hpp"
#include "subsvms/svm.hpp"
#include "subsvms/synth.hpp"

using namespace subsvms;
using nlohmann::json;

namespace {

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& body) {
  if (path.empty() || path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << body)) throw Error("cannot write '" + path + "'");
}

LabeledDataset load(const std::string& path) { return parse_libsvm(read_text(path)); }

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

// Shared SVM flags.
struct SvmFlags {
  std::string kernel = "rbf";
  double C = 100.0;
  double W = 1.0;
  std::optional<double> sigma_sq;
  std::optional<double> gamma;
  std::string loss = "l2";
  double tolerance = 1e-3;
  double l2_shift_divisor = 2.0;

  void attach(CLI::App* app) {
    app->add_option("--kernel", kernel, "linear or rbf")->capture_default_str();
    app->add_option("--C", C, "penalty")->capture_default_str();
    app->add_option("--W", W, "minority (+1) class weight ratio")->capture_default_str();
    auto* s = app->add_option("--sigma-sq", sigma_sq, "RBF width, K = exp(-|x-z|^2 / (2 sigma^2)); default 1/d");
    app->add_option("--gamma", gamma, "RBF as exp(-gamma |x-z|^2)")->excludes(s);
    app->add_option("--loss", loss, "l1 or l2")->capture_default_str();
    app->add_option("--tolerance", tolerance, "SMO stopping tolerance")->capture_default_str();
    app->add_option("--l2-shift-divisor", l2_shift_divisor, "L2 loss diagonal is 1 / (k C)")->capture_default_str();
  }

  MethodSpec method() const {
    MethodSpec m;
    m.kernel = kernel_kind_from_string(kernel);
    m.C = C;
    m.W = W;
    if (sigma_sq) m.sigma_sq = *sigma_sq;
    if (gamma) m.sigma_sq = KernelSpec::rbf_gamma(*gamma).sigma_sq;
    m.loss = loss_from_string(loss);
    m.tolerance = tolerance;
    m.l2_shift_divisor = l2_shift_divisor;
    return m;
  }
};

// "uniform" or a probability.
std::optional<double> parse_p(const std::string& text) {
  if (text == "uniform") return std::nullopt;
  try {
    std::size_t used = 0;
    const double p = std::stod(text, &used);
    if (used == text.size()) return p;
  } catch (const std::exception&) {
  }
  throw InvalidArgument("--p expects a number or 'uniform'");
}

// "log", "log2" or an integer.
void parse_s(const std::string& text, MethodSpec& m) {
  if (text == "log") {
    m.s_rule = SubsampleRule::log;
  } else if (text == "log2") {
    m.s_rule = SubsampleRule::log_squared;
  } else {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(text, &used);
      if (used == text.size()) {
        m.s = v;
        return;
      }
    } catch (const std::exception&) {
    }
    throw InvalidArgument("--s expects an integer, 'log' or 'log2'");
  }
}

// ---------------------------------------------------------------- synth

void add_synth(CLI::App& app) {
  auto* cmd = app.add_subcommand("synth", "generate the two-Gaussian synthetic dataset");
  auto spec = std::make_shared<SynthSpec>();
  auto out = std::make_shared<std::string>("-");
  cmd->add_option("--dim", spec->dimension)->capture_default_str();
  cmd->add_option("--count", spec->count)->capture_default_str();
  cmd->add_option("--beta", spec->beta, "minority share, minority label +1")->capture_default_str();
  cmd->add_option("--mean-distance", spec->mean_distance)->capture_default_str();
  cmd->add_option("--cov-scale", spec->covariance_scale)->capture_default_str();
  cmd->add_option("--margin", spec->enforced_margin)->capture_default_str();
  cmd->add_option("--seed", spec->seed)->capture_default_str();
  cmd->add_option("-o,--output", *out, "LIBSVM output (default stdout)");
  cmd->callback([spec, out] { write_text(*out, write_libsvm(generate(*spec))); });
}

// -------------------------------------------------------------- corrupt

void add_corrupt(CLI::App& app) {
  auto* cmd = app.add_subcommand("corrupt", "flip labels adversarially at budget rho * beta * l");
  struct Args {
    std::string input, output = "-", report;
    CorruptionSpec spec;
    std::string convention = "appendix";
  };
  auto a = std::make_shared<Args>();
  cmd->add_option("-i,--input", a->input, "clean LIBSVM file")->required();
  cmd->add_option("-o,--output", a->output, "corrupted LIBSVM file (default stdout)");
  cmd->add_option("--report", a->report, "JSON corruption report");
  cmd->add_option("--rho", a->spec.rho)->required();
  cmd->add_option("--alpha", a->spec.alpha, "share of flips going majority to minority")->capture_default_str();
  cmd->add_option("--seed", a->spec.seed)->capture_default_str();
  cmd->add_option("--flip-convention", a->convention, "appendix or experiment")->capture_default_str();
  cmd->callback([a] {
    a->spec.convention = flip_convention_from_string(a->convention);
    const Corrupted c = corrupt(load(a->input), a->spec);
    write_text(a->output, write_libsvm(c.data));
    if (!a->report.empty()) write_text(a->report, report_to_json(c.report, a->spec) + "\n");
  });
}

// -------------------------------------------------------------- correct

void add_correct(CLI::App& app) {
  auto* cmd = app.add_subcommand("correct", "relabel a corrupted dataset by subsampled SVM voting");
  struct Args {
    std::string input, output = "-", report, model;
    SvmFlags svm;
    std::string p = "0.5", s = "log2", tie = "observed";
    std::size_t J = 128;
    std::uint64_t seed = 0;
    unsigned threads = 1;
  };
  auto a = std::make_shared<Args>();
  cmd->add_option("-i,--input", a->input, "corrupted LIBSVM file")->required();
  cmd->add_option("-o,--output", a->output, "corrected LIBSVM file (default stdout)");
  cmd->add_option("--report", a->report, "JSON report with changed indices and vote fractions");
  cmd->add_option("--p", a->p, "minority draw probability, or 'uniform'")->capture_default_str();
  cmd->add_option("--s", a->s, "subsample size: integer, 'log' or 'log2'")->capture_default_str();
  cmd->add_option("--J", a->J, "ensemble size")->capture_default_str();
  cmd->add_option("--tie", a->tie, "observed or positive")->capture_default_str();
  cmd->add_option("--seed", a->seed)->capture_default_str();
  cmd->add_option("--threads", a->threads)->capture_default_str();
  cmd->add_option("--retrain", a->model, "train one SVM on the corrected data and write its JSON model here");
  a->svm.attach(cmd);
  cmd->callback([a] {
    const LabeledDataset noisy = load(a->input);
    MethodSpec m = a->svm.method();
    const auto p = parse_p(a->p);
    parse_s(a->s, m);
    EnsembleConfig ec;
    ec.members = a->J;
    ec.sampler.p = p ? *p : class_stats(noisy).beta;
    ec.sampler.s = m.s ? *m.s : subsample_size(noisy.size(), m.s_rule);
    ec.sampler.seed = a->seed;
    ec.kernel = m.kernel_for(noisy.dimension());
    ec.train = m.train_config();
    ec.tie_rule = tie_rule_from_string(a->tie);
    ec.threads = a->threads;
    const EnsembleModel ens = train_ensemble(noisy, ec);
    const CorrectionResult res = correct(noisy, ens, ec.tie_rule);
    write_text(a->output, write_libsvm(res.corrected));
    if (!a->model.empty()) write_text(a->model, model_to_json(train(res.corrected, ec.kernel, ec.train)) + "\n");
    if (!a->report.empty()) {
      json j = {{"n", noisy.size()},
                {"p", ec.sampler.p},
                {"s", ec.sampler.s},
                {"J", ec.members},
                {"seed", ec.sampler.seed},
                {"kernel", to_string(ec.kernel.kind)},
                {"sigma_sq", ec.kernel.sigma_sq},
                {"members_trained", ens.members.size()},
                {"members_skipped", ens.skipped},
                {"degenerate_members", ens.degenerate_count()},
                {"changed_indices", res.changed},
                {"vote_fraction", res.vote_fraction}};
      write_text(a->report, j.dump(2) + "\n");
    }
  });
}

// ---------------------------------------------------------------- train

void add_train(CLI::App& app) {
  auto* cmd = app.add_subcommand("train", "train a baseline classifier and optionally predict a test set");
  struct Args {
    std::string input, method = "single_svm", model, test, predictions;
    SvmFlags svm;
    std::size_t J = 128;
    std::uint64_t seed = 0;
  };
  auto a = std::make_shared<Args>();
  cmd->add_option("-i,--input", a->input, "training LIBSVM file")->required();
  cmd->add_option("--method", a->method, "single_svm, bag_svm or cv_svm")->capture_default_str();
  cmd->add_option("--J", a->J, "bagging ensemble size")->capture_default_str();
  cmd->add_option("--seed", a->seed)->capture_default_str();
  cmd->add_option("--model", a->model, "JSON model output (single SVM results only)");
  cmd->add_option("--test", a->test, "LIBSVM file to predict");
  cmd->add_option("--predictions", a->predictions, "prediction output, one 'label score' line per test point");
  a->svm.attach(cmd);
  cmd->callback([a] {
    const LabeledDataset data = load(a->input);
    MethodSpec m = a->svm.method();
    m.method = method_from_string(a->method);
    m.members = a->J;
    if (m.method == Method::subsvms) throw InvalidArgument("use 'correct' for subsvms");
    const BaselineResult b = train_baseline(data, m, a->seed);
    if (b.cv)
      std::cerr << "cv choice: C=" << b.cv->C << " W=" << b.cv->W << " sigma_sq=" << b.cv->sigma_sq
                << " cv_bac=" << b.cv->cv_bac << "\n";
    if (!a->model.empty()) {
      if (!b.classifier.svm()) throw InvalidArgument("--model needs a single-SVM method");
      write_text(a->model, model_to_json(*b.classifier.svm()) + "\n");
    }
    if (!a->test.empty()) {
      const LabeledDataset test = load(a->test);
      std::string out;
      for (const auto& x : test.features())
        out += std::to_string(b.classifier.predict(x)) + " " + fmt(b.classifier.score(x)) + "\n";
      write_text(a->predictions.empty() ? "-" : a->predictions, out);
    }
  });
}

// ----------------------------------------------------------------- eval

// Lines of "label [score]"; the label doubles as the score when it is absent.
void read_predictions(const std::string& text, std::vector<int>& labels, std::vector<double>& scores) {
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    std::istringstream ls(line);
    double label;
    if (!(ls >> label)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw ParseError(n, "expected a predicted label");
    }
    if (label != 1.0 && label != -1.0 && label != 0.0) throw ParseError(n, "label must be +1, -1 or 0");
    double score = label;
    ls >> score;
    labels.push_back(label > 0 ? kPositive : kNegative);
    scores.push_back(score);
  }
}

void add_eval(CLI::App& app) {
  auto* cmd = app.add_subcommand("eval", "score predictions against true labels");
  struct Args {
    std::string predictions, truth, format = "json", output = "-";
  };
  auto a = std::make_shared<Args>();
  cmd->add_option("--predictions", a->predictions, "'label [score]' per line")->required();
  cmd->add_option("--truth", a->truth, "LIBSVM file holding the true labels")->required();
  cmd->add_option("--format", a->format, "json or csv")->capture_default_str();
  cmd->add_option("-o,--output", a->output);
  cmd->callback([a] {
    std::vector<int> pred;
    std::vector<double> scores;
    read_predictions(read_text(a->predictions), pred, scores);
    const LabeledDataset truth = load(a->truth);
    if (pred.size() != truth.size())
      throw InvalidArgument("predictions and truth differ in length");
    const MetricsReport m = evaluate(pred, scores, truth.labels());
    const auto& c = m.confusion;
    if (a->format == "csv") {
      write_text(a->output, "accuracy,bac,sif,auc,tp,fp,tn,fn\n" + fmt(m.accuracy) + "," + fmt(m.bac) + "," +
                                fmt(m.sif) + "," + fmt(m.auc) + "," + std::to_string(c.tp) + "," +
                                std::to_string(c.fp) + "," + std::to_string(c.tn) + "," +
                                std::to_string(c.fn) + "\n");
    } else if (a->format == "json") {
      json j = {{"accuracy", m.accuracy}, {"bac", m.bac}, {"sif", m.sif}, {"auc", m.auc},
                {"confusion", {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}}}};
      write_text(a->output, j.dump(2) + "\n");
    } else {
      throw InvalidArgument("--format must be json or csv");
    }
  });
}

// --------------------------------------------------------------- bounds

using Params = std::map<std::string, double>;
using Outputs = std::vector<std::pair<std::string, double>>;

std::size_t count_of(const Params& p, const std::string& key) {
  const double v = p.at(key);
  if (v < 0 || std::floor(v) != v) throw InvalidArgument(key + " must be a nonnegative integer");
  return static_cast<std::size_t>(v);
}

bounds::BoundsInput input_of(const Params& p) {
  bounds::BoundsInput in;
  in.r = count_of(p, "r");
  in.delta = p.at("delta");
  in.theta = p.at("theta");
  in.rho = p.at("rho");
  in.beta = p.at("beta");
  in.alpha = p.at("alpha");
  in.s = count_of(p, "s");
  in.p = p.at("p");
  in.R = p.at("R");
  in.gamma = p.at("gamma");
  in.c = p.at("c");
  in.J = count_of(p, "J");
  in.slack_norm_sq = p.at("slack");
  return in;
}

Params default_params() {
  const bounds::BoundsInput d;
  return {{"r", double(d.r)}, {"delta", d.delta}, {"theta", d.theta}, {"rho", d.rho},
          {"beta", d.beta}, {"alpha", d.alpha}, {"s", double(d.s)}, {"p", d.p},
          {"R", d.R}, {"gamma", d.gamma}, {"c", d.c}, {"J", double(d.J)},
          {"slack", d.slack_norm_sq}, {"l", 1000.0}, {"eps", 0.1}, {"eta", 0.0},
          {"phi", 0.4}, {"qa", 0.5}, {"qb", 0.5}, {"k", 1.0}, {"q", 0.5}};
}

const std::map<std::string, std::function<Outputs(const Params&)>>& bound_ops() {
  using namespace bounds;
  static const std::map<std::string, std::function<Outputs(const Params&)>> ops = {
      {"generalization",
       [](const Params& p) {
         return Outputs{{"bound", generalization_bound(p.at("l"), p.at("R"), p.at("gamma"), p.at("slack"),
                                                       p.at("delta"), p.at("c"))}};
       }},
      {"epsilon",
       [](const Params& p) {
         const auto e = epsilon_bound(input_of(p));
         return Outputs{{"full", e.full}, {"regularity_split", e.regularity_split}};
       }},
      {"translate",
       [](const Params& p) { return Outputs{{"bound", translate_error_rate(p.at("eps"), p.at("p"))}}; }},
      {"phi",
       [](const Params& p) {
         const auto v = phi(p.at("eps"), p.at("p"), p.at("rho"), p.at("beta"), p.at("eta"), p.at("delta"));
         return Outputs{{"phi", v.value}, {"clamped", v.clamped()}};
       }},
      {"vote",
       [](const Params& p) {
         const auto v = vote_error_bound(p.at("phi"), count_of(p, "J"));
         return Outputs{{"bound", v.value}, {"applicable", v.applicable ? 1.0 : 0.0}};
       }},
      {"budget",
       [](const Params& p) {
         const auto b = rho_beta_budget(input_of(p), p.at("eta"));
         return Outputs{{"as_printed", b.as_printed}, {"from_derivation", b.from_derivation}};
       }},
      {"budget-subbagging",
       [](const Params& p) {
         const auto b = rho_beta_budget_subbagging(input_of(p), p.at("eta"));
         return Outputs{{"as_printed", b.as_printed}, {"from_derivation", b.from_derivation}};
       }},
      {"clean-probs",
       [](const Params& p) {
         const auto c = clean_point_probs(p.at("beta"), p.at("rho"), p.at("alpha"), p.at("p"));
         return Outputs{{"a_good", c.a_good}, {"b_good", c.b_good}};
       }},
      {"worst-clean-probs",
       [](const Params& p) {
         const auto c = worst_case_clean_probs(p.at("rho"), p.at("p"));
         return Outputs{{"a_good", c.a_good}, {"b_good", c.b_good}};
       }},
      {"binomial-tail",
       [](const Params& p) {
         return Outputs{{"tail", binomial_lower_tail(count_of(p, "s"), count_of(p, "k"), p.at("q"))}};
       }},
      {"eta-exact",
       [](const Params& p) {
         return Outputs{{"eta", eta_exact(count_of(p, "s"), count_of(p, "r"), p.at("qa"), p.at("qb")).value}};
       }},
      {"eta-worst-exact",
       [](const Params& p) {
         const auto c = worst_case_clean_probs(p.at("rho"), p.at("p"));
         return Outputs{{"eta", eta_exact(count_of(p, "s"), count_of(p, "r"), c.a_good, c.b_good).value}};
       }},
      {"eta-hoeffding",
       [](const Params& p) {
         const auto h = eta_hoeffding(count_of(p, "s"), count_of(p, "r"), p.at("rho"), p.at("p"));
         return Outputs{{"value", h.value}, {"as_printed", h.as_printed},
                        {"applicable", h.applicable ? 1.0 : 0.0}};
       }},
      {"eta-surrogate",
       [](const Params& p) {
         return Outputs{{"f", eta_surrogate(p.at("p"), count_of(p, "s"), count_of(p, "r"), p.at("rho"))},
                        {"worst_case_bound",
                         worst_case_eta_bound(p.at("p"), count_of(p, "s"), count_of(p, "r"), p.at("rho"))}};
       }},
      {"s-min",
       [](const Params& p) {
         const auto r = count_of(p, "r");
         return Outputs{{"main", s_min_main(r)},
                        {"appendix", s_min_appendix(r, p.at("rho"))},
                        {"hessian", s_min_hessian(r, p.at("rho"))},
                        {"hoeffding", s_min_hoeffding(r, p.at("rho"))}};
       }},
      {"tail-limit",
       [](const Params& p) { return Outputs{{"k_max", double(eta_tail_limit(count_of(p, "r")))}}; }},
  };
  return ops;
}

struct Sweep {
  std::string param;
  double from, to;
  std::size_t points;
};

Sweep parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  const auto c1 = text.find(':', eq == std::string::npos ? 0 : eq);
  const auto c2 = c1 == std::string::npos ? c1 : text.find(':', c1 + 1);
  if (eq == std::string::npos || c1 == std::string::npos || c2 == std::string::npos)
    throw InvalidArgument("--sweep expects param=a:b:n");
  Sweep s{text.substr(0, eq), 0, 0, 0};
  try {
    s.from = std::stod(text.substr(eq + 1, c1 - eq - 1));
    s.to = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    s.points = std::stoul(text.substr(c2 + 1));
  } catch (const std::exception&) {
    throw InvalidArgument("--sweep expects param=a:b:n");
  }
  if (s.points < 1) throw InvalidArgument("--sweep needs n >= 1");
  return s;
}

double sweep_value(const Sweep& s, std::size_t k) {
  if (s.points == 1) return s.from;
  return s.from + (s.to - s.from) * static_cast<double>(k) / static_cast<double>(s.points - 1);
}

void add_bounds(CLI::App& app) {
  auto* cmd = app.add_subcommand("bounds", "evaluate a theoretical bound");
  struct Args {
    std::string op;
    std::map<std::string, std::optional<double>> overrides;
    std::vector<std::string> sweeps;
    std::string output = "-";
  };
  auto a = std::make_shared<Args>();
  std::vector<std::string> names;
  for (const auto& [name, fn] : bound_ops()) names.push_back(name);
  cmd->add_option("op", a->op, "operation")->required()->check(CLI::IsMember(names));
  for (const auto& [key, value] : default_params()) {
    a->overrides[key];
    cmd->add_option("--" + key, a->overrides[key], "default " + fmt(value));
  }
  cmd->add_option("--sweep", a->sweeps, "param=a:b:n, repeat for a grid; emits CSV");
  cmd->add_option("-o,--output", a->output);
  cmd->callback([a] {
    Params base = default_params();
    for (const auto& [key, value] : a->overrides)
      if (value) base[key] = *value;
    const auto& fn = bound_ops().at(a->op);
    if (a->sweeps.empty()) {
      json j = json::object();
      for (const auto& [name, v] : fn(base)) j[name] = v;
      write_text(a->output, j.dump(2) + "\n");
      return;
    }
    std::vector<Sweep> sweeps;
    for (const auto& s : a->sweeps) {
      sweeps.push_back(parse_sweep(s));
      if (!base.count(sweeps.back().param)) throw InvalidArgument("unknown sweep parameter " + sweeps.back().param);
    }
    std::string out;
    std::vector<std::size_t> k(sweeps.size(), 0);
    bool header = true;
    for (;;) {
      Params p = base;
      for (std::size_t i = 0; i < sweeps.size(); ++i) p[sweeps[i].param] = sweep_value(sweeps[i], k[i]);
      const Outputs o = fn(p);
      if (header) {
        for (const auto& s : sweeps) out += s.param + ",";
        for (std::size_t i = 0; i < o.size(); ++i) out += o[i].first + (i + 1 < o.size() ? "," : "\n");
        header = false;
      }
      for (const auto& s : sweeps) out += fmt(p[s.param]) + ",";
      for (std::size_t i = 0; i < o.size(); ++i) out += fmt(o[i].second) + (i + 1 < o.size() ? "," : "\n");
      std::size_t i = sweeps.size();
      while (i > 0 && ++k[i - 1] == sweeps[i - 1].points) k[--i] = 0;
      if (i == 0) break;
    }
    write_text(a->output, out);
  });
}

// ---------------------------------------------------------------- bench

std::vector<MethodSpec> default_methods() {
  MethodSpec balanced;
  balanced.label = "subsvms_p0.5";
  MethodSpec uniform;
  uniform.label = "subsvms_uniform";
  uniform.p.reset();
  MethodSpec single;
  single.method = Method::single_svm;
  return {balanced, uniform, single};
}

void add_bench(CLI::App& app, int& exit_code) {
  auto* cmd = app.add_subcommand("bench", "run a corruption/correction experiment sweep");
  struct Args {
    std::string config, train, test, output, formats = "csv,json";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> repeats, J;
    std::optional<unsigned> threads;
    std::vector<double> beta, rho, alpha;
    std::optional<std::string> convention;
    bool paper_scale = false;
  };
  auto a = std::make_shared<Args>();
  cmd->add_option("--config", a->config, "JSON experiment spec");
  cmd->add_option("--train", a->train, "LIBSVM training file (replaces synthetic data)");
  cmd->add_option("--test", a->test, "LIBSVM clean test file");
  cmd->add_option("--output", a->output, "report directory; CSV goes to stdout when unset");
  cmd->add_option("--format", a->formats, "comma list of csv, json")->capture_default_str();
  cmd->add_option("--seed", a->seed, "master seed");
  cmd->add_option("--repeats", a->repeats);
  cmd->add_option("--J", a->J, "ensemble size for every method");
  cmd->add_option("--threads", a->threads);
  cmd->add_option("--beta", a->beta)->delimiter(',');
  cmd->add_option("--rho", a->rho)->delimiter(',');
  cmd->add_option("--alpha", a->alpha)->delimiter(',');
  cmd->add_option("--flip-convention", a->convention);
  cmd->add_flag("--paper-scale", a->paper_scale, "J = 1000 and 10 repeats");
  cmd->callback([a, &exit_code] {
    ExperimentSpec spec;
    if (!a->config.empty()) spec = experiment_spec_from_json(read_text(a->config));
    if (spec.methods.empty()) spec.methods = default_methods();
    if (a->paper_scale) {
      spec.repeats = 10;
      for (auto& m : spec.methods) m.members = 1000;
    }
    if (!a->train.empty()) {
      spec.source.train_path = a->train;
      spec.source.test_path = a->test;
    }
    if (a->seed) spec.seed = *a->seed;
    if (a->repeats) spec.repeats = *a->repeats;
    if (a->J)
      for (auto& m : spec.methods) m.members = *a->J;
    if (a->threads) spec.threads = *a->threads;
    if (!a->beta.empty()) spec.beta_grid = a->beta;
    if (!a->rho.empty()) spec.rho_grid = a->rho;
    if (!a->alpha.empty()) spec.alpha_grid = a->alpha;
    if (a->convention) spec.convention = flip_convention_from_string(*a->convention);
    if (!a->output.empty()) spec.output_dir = a->output;

    const ExperimentReport report = run_experiment(spec);
    if (spec.output_dir.empty()) {
      std::cout << report_csv(report);
    } else {
      std::vector<ReportFormat> formats;
      std::stringstream ss(a->formats);
      for (std::string f; std::getline(ss, f, ',');) {
        if (f == "csv") formats.push_back(ReportFormat::csv);
        else if (f == "json") formats.push_back(ReportFormat::json);
        else throw InvalidArgument("unknown report format '" + f + "'");
      }
      emit_report(report, spec.output_dir, formats);
    }
    for (const auto& cell : report.cells)
      for (const auto& r : cell.repeats)
        if (!r.ok) std::cerr << "failed: " << cell.method << " alpha=" << cell.alpha << ": " << r.error << "\n";
    exit_code = report.all_succeeded() ? 0 : 2;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SubSVMs: label error correction by subsampled SVM ensembles"};
  app.set_version_flag("--version", library_version());
  app.require_subcommand(1);
  int exit_code = 0;
  add_synth(app);
  add_corrupt(app);
  add_correct(app);
  add_train(app);
  add_eval(app);
  add_bounds(app);
  add_bench(app, exit_code);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
