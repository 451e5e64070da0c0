#include "subsvms/experiment.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "json.hpp"
#include "parallel.hpp"
#include "subsvms/error.hpp"
#include "subsvms/rng.hpp"
#include "subsvms/sampling.hpp"

#ifndef SUBSVMS_VERSION
#define SUBSVMS_VERSION "0.0.0"
#endif

namespace subsvms {

using nlohmann::json;

std::string library_version() { return SUBSVMS_VERSION; }

std::string to_string(Method m) {
  switch (m) {
    case Method::subsvms: return "subsvms";
    case Method::single_svm: return "single_svm";
    case Method::bag_svm: return "bag_svm";
    case Method::cv_svm: return "cv_svm";
  }
  return "?";
}

Method method_from_string(const std::string& name) {
  if (name == "subsvms") return Method::subsvms;
  if (name == "single_svm" || name == "single") return Method::single_svm;
  if (name == "bag_svm" || name == "bag") return Method::bag_svm;
  if (name == "cv_svm" || name == "cv") return Method::cv_svm;
  throw InvalidArgument("unknown method '" + name + "'");
}

KernelSpec MethodSpec::kernel_for(std::uint32_t dimension) const {
  if (kernel == KernelKind::linear) return KernelSpec::linear();
  return KernelSpec::rbf(sigma_sq ? *sigma_sq : 1.0 / std::max<std::uint32_t>(dimension, 1));
}

TrainConfig MethodSpec::train_config() const {
  TrainConfig cfg;
  cfg.C = C;
  cfg.class_weight_ratio = W;
  cfg.loss = loss;
  cfg.tolerance = tolerance;
  cfg.l2_shift_divisor = l2_shift_divisor;
  return cfg;
}

int Classifier::predict(const FeatureVector& x) const {
  if (auto* m = svm()) return m->predict(x);
  return predict_vote(*ensemble(), x).label;
}

double Classifier::score(const FeatureVector& x) const {
  if (auto* m = svm()) return m->decision_value(x);
  return predict_vote(*ensemble(), x).positive_fraction;
}

namespace {

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

EnsembleModel train_bagging(const LabeledDataset& noisy, std::size_t members, const KernelSpec& kernel,
                            const TrainConfig& cfg, std::uint64_t seed) {
  EnsembleModel ens;
  ens.config.members = members;
  ens.config.kernel = kernel;
  ens.config.train = cfg;
  ens.config.sampler.seed = seed;
  ens.config.sampler.s = noisy.size();
  for (std::size_t j = 0; j < members; ++j) {
    const auto idx = bootstrap_sample(noisy.size(), noisy.size(), derive_seed(seed, j));
    try {
      ens.members.push_back(train(noisy, idx, kernel, cfg));
    } catch (const ConvergenceError&) {
      ens.skipped.push_back(j);
    }
  }
  if (2 * ens.members.size() < members)
    throw ConvergenceError("too few bagging members converged");
  return ens;
}

CvChoice cross_validate(const LabeledDataset& noisy, const MethodSpec& method, std::uint64_t seed) {
  constexpr std::size_t kFolds = 4;
  const double d = std::max<std::uint32_t>(noisy.dimension(), 1);
  std::vector<std::size_t> order(noisy.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<double> sigma_grid{0.1 / d, 1.0 / d, 10.0 / d};
  if (method.kernel == KernelKind::linear) sigma_grid = {1.0};
  CvChoice best;
  best.cv_bac = -1.0;
  for (double C : {1.0, 10.0, 100.0})
    for (double W : {0.1, 1.0, 10.0})
      for (double sigma_sq : sigma_grid) {
        MethodSpec m = method;
        m.C = C;
        m.W = W;
        m.sigma_sq = sigma_sq;
        const KernelSpec kernel = m.kernel_for(noisy.dimension());
        const TrainConfig cfg = m.train_config();
        // Pooled out-of-fold predictions.
        std::vector<int> pred(noisy.size());
        bool failed = false;
        for (std::size_t f = 0; f < kFolds && !failed; ++f) {
          std::vector<std::size_t> fit, held;
          for (std::size_t k = 0; k < order.size(); ++k) (k % kFolds == f ? held : fit).push_back(order[k]);
          try {
            const SvmModel model = train(noisy, fit, kernel, cfg);
            for (auto i : held) pred[i] = model.predict(noisy.x(i));
          } catch (const ConvergenceError&) {
            failed = true;
          }
        }
        if (failed) continue;
        const double score = bac(confusion(pred, noisy.labels()));
        if (score > best.cv_bac) best = {C, W, sigma_sq, score};
      }
  if (best.cv_bac < 0.0) throw ConvergenceError("no cross-validation grid point converged");
  return best;
}

}  // namespace

BaselineResult train_baseline(const LabeledDataset& noisy, const MethodSpec& method,
                              std::uint64_t seed, unsigned threads) {
  const KernelSpec kernel = method.kernel_for(noisy.dimension());
  const TrainConfig cfg = method.train_config();
  switch (method.method) {
    case Method::single_svm:
      return {Classifier(train(noisy, kernel, cfg)), std::nullopt};
    case Method::bag_svm: {
      auto ens = train_bagging(noisy, method.members, kernel, cfg, seed);
      ens.config.threads = threads;
      return {Classifier(std::move(ens)), std::nullopt};
    }
    case Method::cv_svm: {
      const CvChoice choice = cross_validate(noisy, method, seed);
      MethodSpec chosen = method;
      chosen.C = choice.C;
      chosen.W = choice.W;
      chosen.sigma_sq = choice.sigma_sq;
      return {Classifier(train(noisy, chosen.kernel_for(noisy.dimension()), chosen.train_config())),
              choice};
    }
    case Method::subsvms:
      break;
  }
  throw InvalidArgument("subsvms is not a baseline method");
}

void ExperimentSpec::validate() const {
  if (rho_grid.empty() || alpha_grid.empty()) throw InvalidArgument("rho and alpha grids must be nonempty");
  if (source.synthetic() && beta_grid.empty()) throw InvalidArgument("beta grid must be nonempty");
  if (repeats < 1) throw InvalidArgument("repeats must be >= 1");
  if (!source.synthetic() && source.test_path.empty()) throw InvalidArgument("a test file is required");
  for (double rho : rho_grid) CorruptionSpec{rho, 0.0}.validate();
  for (double alpha : alpha_grid) CorruptionSpec{0.0, alpha}.validate();
}

std::size_t CellResult::failures() const {
  return static_cast<std::size_t>(
      std::count_if(repeats.begin(), repeats.end(), [](const RepeatResult& r) { return !r.ok; }));
}

namespace {

template <class Get>
Summary summarize(const std::vector<RepeatResult>& repeats, Get get) {
  std::vector<double> v;
  for (const auto& r : repeats)
    if (r.ok) v.push_back(get(r));
  Summary s;
  if (v.empty()) return {std::nan(""), std::nan(""), std::nan(""), std::nan("")};
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.std = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  return s;
}

}  // namespace

Summary CellResult::summary(double RepeatResult::*field) const {
  return summarize(repeats, [&](const RepeatResult& r) { return r.*field; });
}

Summary CellResult::summary(double MetricsReport::*field) const {
  return summarize(repeats, [&](const RepeatResult& r) { return r.test.*field; });
}

bool ExperimentReport::all_succeeded() const {
  return std::all_of(cells.begin(), cells.end(), [](const CellResult& c) { return c.failures() == 0; });
}

namespace {

constexpr std::uint64_t kTrainStream = 0x7261696eULL;
constexpr std::uint64_t kTestStream = 0x74657374ULL;
constexpr std::uint64_t kCorruptStream = 0x636f7272ULL;

struct Evaluation {
  std::vector<int> labels;
  std::vector<double> scores;
};

RepeatResult run_repeat(const LabeledDataset& clean, const LabeledDataset& test,
                        const CorruptionSpec& cs, const MethodSpec& method,
                        std::uint64_t method_seed, unsigned threads) {
  RepeatResult out;
  out.corruption_seed = cs.seed;
  out.method_seed = method_seed;
  try {
    const Corrupted c = corrupt(clean, cs);
    Evaluation eval;
    const auto t0 = std::chrono::steady_clock::now();
    if (method.method == Method::subsvms) {
      EnsembleConfig ec;
      ec.members = method.members;
      ec.sampler.p = method.p ? *method.p : class_stats(c.data).beta;
      ec.sampler.s = method.s ? *method.s : subsample_size(c.data.size(), method.s_rule);
      ec.sampler.seed = method_seed;
      ec.kernel = method.kernel_for(std::max(clean.dimension(), test.dimension()));
      ec.train = method.train_config();
      ec.tie_rule = method.tie;
      ec.threads = threads;
      const EnsembleModel ens = train_ensemble(c.data, ec);
      out.train_seconds = elapsed_since(t0);
      const CorrectionResult fixed = correct(c.data, ens, method.tie);
      out.recovery = recovery_rate(fixed.corrected, clean);
      if (method.retrain) {
        const SvmModel model = train(fixed.corrected, ec.kernel, ec.train);
        for (const auto& x : test.features()) {
          eval.labels.push_back(model.predict(x));
          eval.scores.push_back(model.decision_value(x));
        }
      } else {
        for (const auto& v : predict_votes(ens, test.features())) {
          eval.labels.push_back(v.label == 0 ? kPositive : v.label);
          eval.scores.push_back(v.positive_fraction);
        }
      }
    } else {
      // Baselines see the full dimension through sigma^2 = 1/d as well.
      MethodSpec m = method;
      if (m.kernel == KernelKind::rbf && !m.sigma_sq && m.method != Method::cv_svm)
        m.sigma_sq = 1.0 / std::max<std::uint32_t>(std::max(clean.dimension(), test.dimension()), 1);
      const BaselineResult b = train_baseline(c.data, m, method_seed, threads);
      out.train_seconds = elapsed_since(t0);
      std::vector<int> train_pred;
      for (const auto& x : c.data.features()) train_pred.push_back(b.classifier.predict(x));
      out.recovery = recovery_rate(c.data.with_labels(std::move(train_pred)), clean);
      for (const auto& x : test.features()) {
        eval.labels.push_back(b.classifier.predict(x));
        eval.scores.push_back(b.classifier.score(x));
      }
    }
    out.test = evaluate(eval.labels, eval.scores, test.labels());
    out.ok = true;
  } catch (const std::exception& e) {
    out.ok = false;
    out.error = e.what();
  }
  return out;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentReport report;
  report.spec = spec;
  report.version = library_version();

  const std::vector<double> betas = spec.source.synthetic() ? spec.beta_grid : std::vector<double>{0.0};
  std::vector<LabeledDataset> cleans, tests;
  if (!spec.source.synthetic()) {
    cleans.push_back(read_libsvm_file(spec.source.train_path));
    tests.push_back(read_libsvm_file(spec.source.test_path));
  } else {
    for (std::size_t bi = 0; bi < betas.size(); ++bi) {
      SynthSpec train_spec = spec.source.synth;
      train_spec.beta = betas[bi];
      train_spec.seed = derive_seed(derive_seed(spec.seed, kTrainStream), bi);
      cleans.push_back(generate(train_spec));
      SynthSpec test_spec = train_spec;
      test_spec.count = spec.source.test_count;
      test_spec.seed = derive_seed(derive_seed(spec.seed, kTestStream), bi);
      tests.push_back(generate(test_spec));
    }
  }

  struct Job {
    std::size_t beta, cell, repeat;
    CorruptionSpec corruption;
    std::uint64_t method_seed;
  };
  std::vector<Job> jobs;
  for (std::size_t bi = 0; bi < betas.size(); ++bi) {
    const double beta = class_stats(cleans[bi]).beta;
    for (std::size_t ri = 0; ri < spec.rho_grid.size(); ++ri)
      for (std::size_t ai = 0; ai < spec.alpha_grid.size(); ++ai)
        for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
          CellResult cell;
          cell.beta = beta;
          cell.rho = spec.rho_grid[ri];
          cell.alpha = spec.alpha_grid[ai];
          cell.method = spec.methods[mi].display_name();
          cell.repeats.resize(spec.repeats);
          for (std::size_t rep = 0; rep < spec.repeats; ++rep) {
            const std::uint64_t key =
                ((bi * spec.rho_grid.size() + ri) * spec.alpha_grid.size() + ai) * spec.repeats + rep;
            CorruptionSpec cs{cell.rho, cell.alpha,
                              derive_seed(derive_seed(spec.seed, kCorruptStream), key), spec.convention};
            jobs.push_back({bi, report.cells.size(), rep, cs, derive_seed(cs.seed, mi)});
          }
          report.cells.push_back(std::move(cell));
        }
  }

  // Cells run concurrently; each job owns its output slot, so the report does
  // not depend on scheduling.
  const std::size_t methods = spec.methods.size();
  detail::parallel_for(jobs.size(), spec.threads, [&](std::size_t k) {
    const Job& job = jobs[k];
    const MethodSpec& method = spec.methods[job.cell % methods];
    report.cells[job.cell].repeats[job.repeat] =
        run_repeat(cleans[job.beta], tests[job.beta], job.corruption, method, job.method_seed, 1);
  });
  return report;
}

// ---------------------------------------------------------------- JSON specs

namespace {

json method_to_json(const MethodSpec& m) {
  json j = {{"method", to_string(m.method)},
            {"label", m.display_name()},
            {"kernel", to_string(m.kernel)},
            {"C", m.C},
            {"W", m.W},
            {"loss", to_string(m.loss)},
            {"tolerance", m.tolerance},
            {"l2_shift_divisor", m.l2_shift_divisor},
            {"J", m.members},
            {"tie", to_string(m.tie)},
            {"retrain", m.retrain}};
  j["sigma_sq"] = m.sigma_sq ? json(*m.sigma_sq) : json("1/d");
  j["p"] = m.p ? json(*m.p) : json("uniform");
  if (m.s) j["s"] = *m.s;
  else j["s"] = m.s_rule == SubsampleRule::log ? "log" : "log2";
  return j;
}

MethodSpec method_from_json(const json& j) {
  MethodSpec m;
  m.method = method_from_string(j.value("method", "subsvms"));
  m.label = j.value("label", "");
  m.kernel = kernel_kind_from_string(j.value("kernel", "rbf"));
  if (j.contains("sigma_sq") && j["sigma_sq"].is_number()) m.sigma_sq = j["sigma_sq"].get<double>();
  if (j.contains("gamma") && j["gamma"].is_number())
    m.sigma_sq = 1.0 / (2.0 * j["gamma"].get<double>());
  m.C = j.value("C", m.C);
  m.W = j.value("W", m.W);
  m.loss = loss_from_string(j.value("loss", "l2"));
  m.tolerance = j.value("tolerance", m.tolerance);
  m.l2_shift_divisor = j.value("l2_shift_divisor", m.l2_shift_divisor);
  m.members = j.value("J", m.members);
  if (j.contains("p")) {
    if (j["p"].is_string()) {
      if (j["p"].get<std::string>() != "uniform") throw InvalidArgument("p must be a number or \"uniform\"");
      m.p.reset();
    } else {
      m.p = j["p"].get<double>();
    }
  }
  if (j.contains("s")) {
    if (j["s"].is_string()) {
      const auto rule = j["s"].get<std::string>();
      if (rule == "log") m.s_rule = SubsampleRule::log;
      else if (rule == "log2") m.s_rule = SubsampleRule::log_squared;
      else throw InvalidArgument("s must be an integer, \"log\" or \"log2\"");
    } else {
      m.s = j["s"].get<std::size_t>();
    }
  }
  m.tie = tie_rule_from_string(j.value("tie", "observed"));
  m.retrain = j.value("retrain", false);
  return m;
}

}  // namespace

ExperimentSpec experiment_spec_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    ExperimentSpec spec;
    const json data = j.value("data", json::object());
    if (data.contains("train")) {
      spec.source.train_path = data.at("train").get<std::string>();
      spec.source.test_path = data.value("test", "");
    } else {
      const json syn = data.value("synthetic", json::object());
      auto& s = spec.source.synth;
      s.dimension = syn.value("dimension", s.dimension);
      s.count = syn.value("count", s.count);
      s.mean_distance = syn.value("mean_distance", s.mean_distance);
      s.covariance_scale = syn.value("covariance_scale", s.covariance_scale);
      s.enforced_margin = syn.value("enforced_margin", s.enforced_margin);
      spec.source.test_count = syn.value("test_count", spec.source.test_count);
    }
    spec.beta_grid = j.value("beta", spec.beta_grid);
    spec.rho_grid = j.value("rho", spec.rho_grid);
    spec.alpha_grid = j.value("alpha", spec.alpha_grid);
    spec.convention = flip_convention_from_string(j.value("flip_convention", "appendix"));
    if (j.contains("methods"))
      for (const auto& m : j.at("methods")) spec.methods.push_back(method_from_json(m));
    spec.repeats = j.value("repeats", spec.repeats);
    spec.seed = j.value("seed", spec.seed);
    spec.threads = j.value("threads", spec.threads);
    spec.output_dir = j.value("output", "");
    return spec;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad experiment spec: ") + e.what());
  }
}

std::string experiment_spec_to_json(const ExperimentSpec& spec) {
  json data;
  if (spec.source.synthetic()) {
    const auto& s = spec.source.synth;
    data["synthetic"] = {{"dimension", s.dimension},
                         {"count", s.count},
                         {"mean_distance", s.mean_distance},
                         {"covariance_scale", s.covariance_scale},
                         {"enforced_margin", s.enforced_margin},
                         {"test_count", spec.source.test_count}};
  } else {
    data = {{"train", spec.source.train_path}, {"test", spec.source.test_path}};
  }
  json methods = json::array();
  for (const auto& m : spec.methods) methods.push_back(method_to_json(m));
  json j = {{"data", data},
            {"rho", spec.rho_grid},
            {"alpha", spec.alpha_grid},
            {"flip_convention", to_string(spec.convention)},
            {"methods", methods},
            {"repeats", spec.repeats},
            {"seed", spec.seed},
            {"threads", spec.threads},
            {"output", spec.output_dir}};
  if (spec.source.synthetic()) j["beta"] = spec.beta_grid;
  return j.dump(2);
}

// ------------------------------------------------------------------ reports

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

struct MetricColumn {
  const char* name;
  double RepeatResult::*repeat_field = nullptr;
  double MetricsReport::*test_field = nullptr;
};

const MetricColumn kColumns[] = {
    {"recovery", &RepeatResult::recovery, nullptr},
    {"accuracy", nullptr, &MetricsReport::accuracy},
    {"bac", nullptr, &MetricsReport::bac},
    {"sif", nullptr, &MetricsReport::sif},
    {"auc", nullptr, &MetricsReport::auc},
};

double value_of(const MetricColumn& c, const RepeatResult& r) {
  return c.repeat_field ? r.*(c.repeat_field) : r.test.*(c.test_field);
}

Summary summary_of(const MetricColumn& c, const CellResult& cell) {
  return c.repeat_field ? cell.summary(c.repeat_field) : cell.summary(c.test_field);
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string report_csv(const ExperimentReport& report) {
  std::string out = "row,beta,rho,alpha,method,repeat,status";
  for (const auto& c : kColumns)
    for (const char* stat : {"", "_std", "_min", "_max"}) out += std::string(",") + c.name + stat;
  out += '\n';
  for (const auto& cell : report.cells) {
    const std::string key = num(cell.beta) + "," + num(cell.rho) + "," + num(cell.alpha) + "," +
                            csv_quote(cell.method);
    for (std::size_t r = 0; r < cell.repeats.size(); ++r) {
      const auto& rep = cell.repeats[r];
      out += "repeat," + key + "," + std::to_string(r) + "," + (rep.ok ? "ok" : "failed");
      for (const auto& c : kColumns) out += "," + (rep.ok ? num(value_of(c, rep)) : "") + ",,,";
      out += '\n';
    }
    out += "aggregate," + key + ",all," +
           (cell.failures() ? std::to_string(cell.failures()) + "_failed" : std::string("ok"));
    for (const auto& c : kColumns) {
      const Summary s = summary_of(c, cell);
      out += "," + num(s.mean) + "," + num(s.std) + "," + num(s.min) + "," + num(s.max);
    }
    out += '\n';
  }
  return out;
}

std::string timings_csv(const ExperimentReport& report) {
  std::string out = "beta,rho,alpha,method,repeat,train_seconds\n";
  for (const auto& cell : report.cells)
    for (std::size_t r = 0; r < cell.repeats.size(); ++r)
      out += num(cell.beta) + "," + num(cell.rho) + "," + num(cell.alpha) + "," +
             csv_quote(cell.method) + "," + std::to_string(r) + "," +
             num(cell.repeats[r].train_seconds) + "\n";
  return out;
}

std::string report_json(const ExperimentReport& report) {
  json cells = json::array();
  for (const auto& cell : report.cells) {
    json reps = json::array();
    for (const auto& r : cell.repeats) {
      json jr = {{"ok", r.ok}, {"corruption_seed", r.corruption_seed}, {"method_seed", r.method_seed},
                 {"train_seconds", r.train_seconds}};
      if (r.ok) {
        jr["recovery"] = r.recovery;
        jr["accuracy"] = r.test.accuracy;
        jr["bac"] = r.test.bac;
        jr["sif"] = r.test.sif;
        jr["auc"] = r.test.auc;
        jr["confusion"] = {{"tp", r.test.confusion.tp}, {"fp", r.test.confusion.fp},
                           {"tn", r.test.confusion.tn}, {"fn", r.test.confusion.fn}};
      } else {
        jr["error"] = r.error;
      }
      reps.push_back(jr);
    }
    json summary = json::object();
    for (const auto& c : kColumns) {
      const Summary s = summary_of(c, cell);
      summary[c.name] = {{"mean", s.mean}, {"std", s.std}, {"min", s.min}, {"max", s.max}};
    }
    cells.push_back({{"beta", cell.beta},
                     {"rho", cell.rho},
                     {"alpha", cell.alpha},
                     {"method", cell.method},
                     {"failures", cell.failures()},
                     {"summary", summary},
                     {"repeats", reps}});
  }
  json j = {{"version", report.version},
            {"provenance", {{"seed", report.spec.seed}, {"spec", json::parse(experiment_spec_to_json(report.spec))}}},
            {"cells", cells}};
  return j.dump(2);
}

void emit_report(const ExperimentReport& report, const std::string& dir,
                 const std::vector<ReportFormat>& formats) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  auto write = [&](const std::string& name, const std::string& body) {
    const auto path = (fs::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << body)) throw Error("cannot write report file '" + path + "'");
  };
  for (auto f : formats) {
    if (f == ReportFormat::csv) {
      write("results.csv", report_csv(report));
      write("timings.csv", timings_csv(report));
    } else {
      write("report.json", report_json(report));
    }
  }
}

}  // namespace subsvms
