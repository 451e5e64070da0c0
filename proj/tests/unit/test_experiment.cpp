#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "subsvms/error.hpp"
#include "subsvms/corruption.hpp"
#include "subsvms/experiment.hpp"
#include "subsvms/rng.hpp"
#include "subsvms/sampling.hpp"
#include "subsvms/synth.hpp"

using namespace subsvms;

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec spec;
  spec.source.synth.count = 300;
  spec.source.test_count = 200;
  spec.alpha_grid = {0.0, 1.0};
  spec.repeats = 2;
  MethodSpec sub;
  sub.members = 16;
  MethodSpec single;
  single.method = Method::single_svm;
  spec.methods = {sub, single};
  spec.seed = 5;
  return spec;
}

std::size_t lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

LabeledDataset balanced_synth() {
  SynthSpec s;
  s.count = 200;
  s.beta = 0.5;
  s.seed = 4;
  return generate(s);
}

}  // namespace

TEST_SUITE("experiment") {
  TEST_CASE("cell and row counts") {
    auto spec = small_spec();
    spec.beta_grid = {0.1, 0.25};
    spec.rho_grid = {0.5, 0.75};
    const auto report = run_experiment(spec);
    CHECK(report.cells.size() == 2 * 2 * 2 * 2);
    CHECK(report.all_succeeded());
    const auto csv = report_csv(report);
    CHECK(lines(csv) == 1 + report.cells.size() * (spec.repeats + 1));
    CHECK(lines(timings_csv(report)) == 1 + report.cells.size() * spec.repeats);
  }

  TEST_CASE("per-cell values are sane") {
    const auto report = run_experiment(small_spec());
    for (const auto& cell : report.cells) {
      for (auto field : {&MetricsReport::bac, &MetricsReport::accuracy, &MetricsReport::auc, &MetricsReport::sif}) {
        const auto s = cell.summary(field);
        CHECK(s.min <= s.mean + 1e-15);
        CHECK(s.mean <= s.max + 1e-15);
        CHECK(s.min >= 0.0);
        CHECK(s.max <= 1.0);
      }
      const auto rec = cell.summary(&RepeatResult::recovery);
      CHECK(rec.min >= 0.0);
      CHECK(rec.max <= 1.0);
    }
  }

  TEST_CASE("same seed, byte-identical CSV") {
    auto spec = small_spec();
    spec.threads = 1;
    const auto a = report_csv(run_experiment(spec));
    spec.threads = 3;
    const auto b = report_csv(run_experiment(spec));
    CHECK(a == b);
    spec.seed = 6;
    CHECK(report_csv(run_experiment(spec)) != a);
  }

  TEST_CASE("empty sweep gives a header-only CSV") {
    auto spec = small_spec();
    spec.methods.clear();
    const auto report = run_experiment(spec);
    CHECK(report.cells.empty());
    const auto csv = report_csv(report);
    CHECK(lines(csv) == 1);
    CHECK(csv.rfind("row,beta,rho,alpha,method,repeat,status", 0) == 0);
  }

  TEST_CASE("failures are recorded without aborting") {
    auto spec = small_spec();
    spec.methods[0].p = 1.5;  // invalid sampler bias
    const auto report = run_experiment(spec);
    REQUIRE(report.cells.size() == 4);
    CHECK_FALSE(report.all_succeeded());
    CHECK(report.cells[0].failures() == 2);
    CHECK(report.cells[1].failures() == 0);
    CHECK_FALSE(report.cells[0].repeats[0].error.empty());
    CHECK(report_csv(report).find("failed") != std::string::npos);
  }

  TEST_CASE("spec JSON round-trip") {
    auto spec = small_spec();
    spec.methods[0].p.reset();
    spec.methods[0].s = 30;
    spec.methods[1].sigma_sq = 0.3;
    spec.convention = FlipConvention::experiment;
    const auto text = experiment_spec_to_json(spec);
    const auto back = experiment_spec_from_json(text);
    CHECK(experiment_spec_to_json(back) == text);
    CHECK_FALSE(back.methods[0].p.has_value());
    CHECK(back.methods[0].s == std::optional<std::size_t>(30));
    CHECK(back.methods[1].sigma_sq == std::optional<double>(0.3));
    CHECK_THROWS_AS(experiment_spec_from_json("{\"methods\": [{\"method\": \"forest\"}]}"), InvalidArgument);
    CHECK_THROWS_AS(experiment_spec_from_json("{"), InvalidArgument);
  }

  TEST_CASE("report JSON mirrors the run") {
    const auto report = run_experiment(small_spec());
    const auto j = nlohmann::json::parse(report_json(report));
    CHECK(j.at("cells").size() == report.cells.size());
    CHECK(j.at("provenance").at("seed").get<std::uint64_t>() == 5);
    CHECK(j.at("version").get<std::string>() == library_version());
    CHECK(j.at("cells")[0].at("repeats").size() == 2);
  }

  TEST_CASE("emit_report writes files and rejects bad paths") {
    const auto report = run_experiment(small_spec());
    const auto dir = std::filesystem::temp_directory_path() / "subsvms_emit_test";
    std::filesystem::remove_all(dir);
    emit_report(report, dir.string(), {ReportFormat::csv, ReportFormat::json});
    CHECK(std::filesystem::exists(dir / "results.csv"));
    CHECK(std::filesystem::exists(dir / "timings.csv"));
    CHECK(std::filesystem::exists(dir / "report.json"));
    std::ifstream in(dir / "results.csv");
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == report_csv(report));
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(emit_report(report, "/proc/not/a/dir", {ReportFormat::csv}), Error);
  }

  TEST_CASE("cross-validated SVM on clean balanced data") {
    MethodSpec m;
    m.method = Method::cv_svm;
    const auto r = train_baseline(balanced_synth(), m, 1);
    REQUIRE(r.cv.has_value());
    CHECK(r.cv->cv_bac >= 0.95);
    REQUIRE(r.classifier.svm() != nullptr);
  }

  TEST_CASE("one-member bagging is one bootstrap SVM") {
    const auto d = balanced_synth();
    MethodSpec m;
    m.method = Method::bag_svm;
    m.members = 1;
    const auto r = train_baseline(d, m, 3);
    REQUIRE(r.classifier.ensemble() != nullptr);
    const auto& ens = *r.classifier.ensemble();
    REQUIRE(ens.members.size() == 1);
    const auto idx = bootstrap_sample(d.size(), d.size(), derive_seed(3, 0));
    const auto direct = train(d, idx, m.kernel_for(d.dimension()), m.train_config());
    for (std::size_t i = 0; i < d.size(); i += 9)
      CHECK(ens.members[0].decision_value(d.x(i)) == doctest::Approx(direct.decision_value(d.x(i))));
  }

  TEST_CASE("fixed-parameter single SVM matches the member configuration") {
    const auto d = balanced_synth();
    MethodSpec m;
    m.method = Method::single_svm;
    const auto r = train_baseline(d, m, 0);
    REQUIRE(r.classifier.svm() != nullptr);
    const KernelSpec k = m.kernel_for(d.dimension());
    CHECK(k == KernelSpec::rbf(1.0 / d.dimension()));
    CHECK(m.train_config().C == 100.0);
    CHECK(m.train_config().class_weight_ratio == 1.0);
    const auto direct = train(d, k, TrainConfig{});
    for (std::size_t i = 0; i < d.size(); i += 9)
      CHECK(r.classifier.svm()->decision_value(d.x(i)) == direct.decision_value(d.x(i)));
  }

  TEST_CASE("subsvms trains faster than one SVM on large data") {
    SynthSpec s;
    s.count = 3000;
    s.beta = 0.25;
    s.seed = 2;
    const auto clean = generate(s);
    const auto noisy = corrupt(clean, {0.75, 0.5, 1}).data;
    EnsembleConfig ec;
    ec.sampler = {0.5, subsample_size(noisy.size(), SubsampleRule::log_squared), 1};
    ec.kernel = KernelSpec::rbf(0.5);
    const auto t0 = std::chrono::steady_clock::now();
    const auto ens = train_ensemble(noisy, ec);
    const auto t1 = std::chrono::steady_clock::now();
    const auto single = train(noisy, KernelSpec::rbf(0.5), TrainConfig{});
    const auto t2 = std::chrono::steady_clock::now();
    MESSAGE("subsvms " << std::chrono::duration<double>(t1 - t0).count() << " s, single "
                      << std::chrono::duration<double>(t2 - t1).count() << " s");
    CHECK(ens.members.size() == 128);
    CHECK(t1 - t0 < t2 - t1);
  }
}
