#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "subsvms/corruption.hpp"
#include "subsvms/dataset.hpp"
#include "subsvms/ensemble.hpp"
#include "subsvms/metrics.hpp"
#include "subsvms/svm.hpp"
#include "subsvms/synth.hpp"

namespace subsvms {

enum class Method { subsvms, single_svm, bag_svm, cv_svm };

std::string to_string(Method m);
Method method_from_string(const std::string& name);

// Parameters for one method column of a sweep. Defaults are the fixed
// SubSVMs settings: C = 100, W = 1, sigma^2 = 1/d, L2 loss, s = ceil(ln^2 l).
struct MethodSpec {
  Method method = Method::subsvms;
  std::string label;  // report name; defaults to the method name
  KernelKind kernel = KernelKind::rbf;
  std::optional<double> sigma_sq;  // unset: 1 / d
  double C = 100.0;
  double W = 1.0;
  Loss loss = Loss::l2;
  double tolerance = 1e-3;
  double l2_shift_divisor = 2.0;
  std::size_t members = 128;     // J for subsvms and bag_svm
  std::optional<double> p = 0.5;  // unset: uniform sampling, p = minority share of D-hat
  std::optional<std::size_t> s;   // unset: from s_rule
  SubsampleRule s_rule = SubsampleRule::log_squared;
  TieRule tie = TieRule::keep_observed;
  bool retrain = false;  // subsvms: score the test set with one SVM trained on D-tilde

  std::string display_name() const { return label.empty() ? to_string(method) : label; }
  KernelSpec kernel_for(std::uint32_t dimension) const;
  TrainConfig train_config() const;
};

// Trained classifier of any method.
class Classifier {
 public:
  explicit Classifier(SvmModel m) : model_(std::move(m)) {}
  explicit Classifier(EnsembleModel e) : model_(std::move(e)) {}

  int predict(const FeatureVector& x) const;
  // Decision value for SVMs, share of +1 votes for ensembles.
  double score(const FeatureVector& x) const;
  const SvmModel* svm() const { return std::get_if<SvmModel>(&model_); }
  const EnsembleModel* ensemble() const { return std::get_if<EnsembleModel>(&model_); }

 private:
  std::variant<SvmModel, EnsembleModel> model_;
};

struct CvChoice {
  double C = 0.0, W = 0.0, sigma_sq = 0.0;
  double cv_bac = 0.0;
};

struct BaselineResult {
  Classifier classifier;
  std::optional<CvChoice> cv;  // cv_svm only
};

// single_svm: one SVM with the given parameters. bag_svm: `members` SVMs on
// bootstrap samples of size l, majority vote. cv_svm: grid C in {1,10,100},
// W in {0.1,1,10}, sigma^2 in {0.1/d,1/d,10/d} by 4-fold CV maximising BAC
// on the training labels, then refit on all of `noisy`.
BaselineResult train_baseline(const LabeledDataset& noisy, const MethodSpec& method,
                              std::uint64_t seed, unsigned threads = 1);

struct DataSource {
  // Synthetic when train_path is empty; beta comes from the sweep grid.
  SynthSpec synth;
  std::size_t test_count = 1000;
  std::string train_path;
  std::string test_path;

  bool synthetic() const { return train_path.empty(); }
};

struct ExperimentSpec {
  DataSource source;
  std::vector<double> beta_grid{0.25};  // synthetic sources only
  std::vector<double> rho_grid{0.75};
  std::vector<double> alpha_grid{0.0, 0.25, 0.5, 0.75, 1.0};
  FlipConvention convention = FlipConvention::appendix;
  std::vector<MethodSpec> methods;
  std::size_t repeats = 5;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string output_dir;

  void validate() const;
};

struct RepeatResult {
  bool ok = false;
  std::string error;
  std::uint64_t corruption_seed = 0;
  std::uint64_t method_seed = 0;
  double recovery = 0.0;  // training labels vs clean D
  MetricsReport test;     // held-out clean test set
  double train_seconds = 0.0;
};

struct Summary {
  double mean = 0.0, std = 0.0, min = 0.0, max = 0.0;
};

struct CellResult {
  double beta = 0.0;  // clean minority share of the training data
  double rho = 0.0;
  double alpha = 0.0;
  std::string method;
  std::vector<RepeatResult> repeats;

  std::size_t failures() const;
  Summary summary(double RepeatResult::*field) const;
  Summary summary(double MetricsReport::*field) const;
};

struct ExperimentReport {
  ExperimentSpec spec;
  std::string version;
  std::vector<CellResult> cells;

  bool all_succeeded() const;
};

// Every cell and repeat: corrupt -> train -> correct / evaluate. Per-repeat
// seeds derive from spec.seed, so the report is a pure function of the spec
// apart from timings.
ExperimentReport run_experiment(const ExperimentSpec& spec);

ExperimentSpec experiment_spec_from_json(const std::string& text);
std::string experiment_spec_to_json(const ExperimentSpec& spec);

// One row per (cell, repeat) plus one aggregate row per cell; no timings.
std::string report_csv(const ExperimentReport& report);
std::string timings_csv(const ExperimentReport& report);
std::string report_json(const ExperimentReport& report);

enum class ReportFormat { csv, json };
// Writes results.csv + timings.csv and/or report.json into `dir`.
void emit_report(const ExperimentReport& report, const std::string& dir,
                 const std::vector<ReportFormat>& formats);

std::string library_version();

}  // namespace subsvms
