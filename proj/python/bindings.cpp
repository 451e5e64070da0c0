#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "subsvms/bounds.hpp"
#include "subsvms/corruption.hpp"
#include "subsvms/dataset.hpp"
#include "subsvms/ensemble.hpp"
#include "subsvms/error.hpp"
#include "subsvms/experiment.hpp"
#include "subsvms/metrics.hpp"
#include "subsvms/sampling.hpp"
#include "subsvms/svm.hpp"
#include "subsvms/synth.hpp"

namespace py = pybind11;
using namespace subsvms;

namespace {

LabeledDataset from_dense(const std::vector<std::vector<double>>& X, const std::vector<int>& y) {
  if (X.size() != y.size()) throw InvalidArgument("X and y differ in length");
  std::vector<FeatureVector> rows;
  rows.reserve(X.size());
  for (const auto& row : X) rows.push_back(FeatureVector::dense(row));
  return LabeledDataset(std::move(rows), y);
}

std::vector<std::vector<double>> to_dense(const LabeledDataset& d) {
  std::vector<std::vector<double>> out;
  for (const auto& x : d.features()) {
    std::vector<double> row(d.dimension(), 0.0);
    for (const auto& f : x.entries()) row[f.index - 1] = f.value;
    out.push_back(std::move(row));
  }
  return out;
}

KernelSpec make_kernel(const std::string& kind, std::optional<double> sigma_sq, std::uint32_t d) {
  MethodSpec m;
  m.kernel = kernel_kind_from_string(kind);
  m.sigma_sq = sigma_sq;
  return m.kernel_for(d);
}

py::dict fractions_dict(const ClassFractions& f) {
  py::dict d;
  d["a_hat"] = f.a_hat;
  d["b_hat"] = f.b_hat;
  d["a_good"] = f.a_good;
  d["a_bad"] = f.a_bad;
  d["b_good"] = f.b_good;
  d["b_bad"] = f.b_bad;
  return d;
}

}  // namespace

PYBIND11_MODULE(_subsvms, m) {
  m.doc() = "Label error correction with subsampled SVM ensembles";
  m.attr("__version__") = library_version();

  static py::exception<Error> error(m, "Error");
  py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", error.ptr());
  py::register_exception<NonSeparableError>(m, "NonSeparableError", error.ptr());
  py::register_exception<InfeasibleError>(m, "InfeasibleError", error.ptr());

  py::class_<LabeledDataset>(m, "Dataset")
      .def(py::init(&from_dense), py::arg("X"), py::arg("y"))
      .def("__len__", &LabeledDataset::size)
      .def_property_readonly("dimension", &LabeledDataset::dimension)
      .def_property_readonly("labels",
                             [](const LabeledDataset& d) { return std::vector<int>(d.labels().begin(), d.labels().end()); })
      .def("dense", &to_dense)
      .def("with_labels", &LabeledDataset::with_labels)
      .def("to_libsvm", &write_libsvm)
      .def("__eq__", &LabeledDataset::operator==);

  m.def("parse_libsvm", [](const std::string& text) { return parse_libsvm(text); });
  m.def("read_libsvm", &read_libsvm_file);
  m.def("write_libsvm", &write_libsvm_file, py::arg("data"), py::arg("path"));

  m.def(
      "class_stats",
      [](const LabeledDataset& d) {
        const ClassStats s = class_stats(d);
        py::dict out;
        out["minority_label"] = s.minority_label;
        out["minority_count"] = s.minority_count;
        out["majority_count"] = s.majority_count;
        out["beta"] = s.beta;
        return out;
      },
      py::arg("data"));

  m.def(
      "generate",
      [](std::uint32_t dimension, std::size_t count, double beta, double mean_distance,
         double covariance_scale, double enforced_margin, std::uint64_t seed) {
        return generate({dimension, count, beta, mean_distance, covariance_scale, enforced_margin, seed});
      },
      py::arg("dimension") = 2, py::arg("count") = 1000, py::arg("beta") = 0.5,
      py::arg("mean_distance") = 2.0, py::arg("covariance_scale") = 0.1,
      py::arg("enforced_margin") = 0.2, py::arg("seed") = 0);

  m.def(
      "corrupt",
      [](const LabeledDataset& clean, double rho, double alpha, std::uint64_t seed,
         const std::string& convention) {
        const CorruptionSpec spec{rho, alpha, seed, flip_convention_from_string(convention)};
        Corrupted c = corrupt(clean, spec);
        py::dict report;
        report["minority_label"] = c.report.minority_label;
        report["n_flips"] = c.report.n_flips;
        report["n_b_to_a"] = c.report.n_b_to_a;
        report["n_a_to_b"] = c.report.n_a_to_b;
        report["flipped_indices"] = c.report.flipped_indices();
        report["realized"] = fractions_dict(c.report.realized);
        return py::make_tuple(std::move(c.data), report);
      },
      py::arg("data"), py::arg("rho"), py::arg("alpha") = 0.5, py::arg("seed") = 0,
      py::arg("convention") = "appendix");

  m.def(
      "correct",
      [](const LabeledDataset& noisy, std::optional<double> p, std::optional<std::size_t> s,
         std::size_t J, const std::string& kernel, std::optional<double> sigma_sq, double C, double W,
         const std::string& loss, const std::string& tie, std::uint64_t seed, unsigned threads) {
        EnsembleConfig ec;
        ec.members = J;
        ec.sampler.p = p ? *p : class_stats(noisy).beta;
        ec.sampler.s = s ? *s : subsample_size(noisy.size(), SubsampleRule::log_squared);
        ec.sampler.seed = seed;
        ec.kernel = make_kernel(kernel, sigma_sq, noisy.dimension());
        ec.train.C = C;
        ec.train.class_weight_ratio = W;
        ec.train.loss = loss_from_string(loss);
        ec.tie_rule = tie_rule_from_string(tie);
        ec.threads = threads;
        CorrectionResult r;
        {
          py::gil_scoped_release release;
          r = correct(noisy, train_ensemble(noisy, ec), ec.tie_rule);
        }
        return py::make_tuple(std::move(r.corrected), r.vote_fraction, r.changed);
      },
      py::arg("data"), py::arg("p") = 0.5, py::arg("s") = py::none(), py::arg("J") = 128,
      py::arg("kernel") = "rbf", py::arg("sigma_sq") = py::none(), py::arg("C") = 100.0,
      py::arg("W") = 1.0, py::arg("loss") = "l2", py::arg("tie") = "observed", py::arg("seed") = 0,
      py::arg("threads") = 1,
      "Relabel every point by majority vote of J SVMs trained on p-biased subsamples. "
      "p=None samples uniformly. Returns (corrected, vote_fraction, changed_indices).");

  py::class_<SvmModel>(m, "SvmModel")
      .def_readonly("bias", &SvmModel::bias)
      .def_readonly("degenerate", &SvmModel::degenerate)
      .def_readonly("iterations", &SvmModel::iterations)
      .def_readonly("dual_objective", &SvmModel::dual_objective)
      .def_property_readonly("n_support", [](const SvmModel& s) { return s.support_vectors.size(); })
      .def_property_readonly("alphas",
                             [](const SvmModel& s) {
                               std::vector<std::pair<std::size_t, double>> out;
                               for (const auto& sv : s.support_vectors) out.emplace_back(sv.index, sv.alpha);
                               return out;
                             })
      .def("decision_value",
           [](const SvmModel& s, const std::vector<double>& x) { return s.decision_value(FeatureVector::dense(x)); })
      .def("predict", [](const SvmModel& s, const std::vector<double>& x) { return s.predict(FeatureVector::dense(x)); })
      .def("geometric_margin", &SvmModel::geometric_margin)
      .def("to_json", &model_to_json);
  m.def("model_from_json", &model_from_json);

  m.def(
      "train_svm",
      [](const LabeledDataset& d, const std::string& kernel, std::optional<double> sigma_sq, double C,
         double W, const std::string& loss, double tolerance) {
        TrainConfig cfg;
        cfg.C = C;
        cfg.class_weight_ratio = W;
        cfg.loss = loss_from_string(loss);
        cfg.tolerance = tolerance;
        py::gil_scoped_release release;
        return train(d, make_kernel(kernel, sigma_sq, d.dimension()), cfg);
      },
      py::arg("data"), py::arg("kernel") = "rbf", py::arg("sigma_sq") = py::none(), py::arg("C") = 100.0,
      py::arg("W") = 1.0, py::arg("loss") = "l2", py::arg("tolerance") = 1e-3);

  m.def("bac", [](const std::vector<int>& pred, const std::vector<int>& truth) { return bac(confusion(pred, truth)); });
  m.def("sif", [](const std::vector<int>& pred, const std::vector<int>& truth) { return sif(confusion(pred, truth)); });
  m.def("accuracy",
        [](const std::vector<int>& pred, const std::vector<int>& truth) { return accuracy(confusion(pred, truth)); });
  m.def("auc", [](const std::vector<double>& scores, const std::vector<int>& truth) { return auc(scores, truth); });
  m.def("recovery_rate", &recovery_rate, py::arg("recovered"), py::arg("clean"));

  auto b = m.def_submodule("bounds", "Closed-form and exact bound evaluators");
  b.def("vote_error_bound", [](double phi, std::size_t J) { return bounds::vote_error_bound(phi, J).value; });
  b.def("eta_exact", [](std::size_t s, std::size_t r, double qa, double qb) { return bounds::eta_exact(s, r, qa, qb).value; });
  b.def("eta_hoeffding", [](std::size_t s, std::size_t r, double rho, double p) {
    const auto h = bounds::eta_hoeffding(s, r, rho, p);
    return py::make_tuple(h.applicable, h.value, h.as_printed);
  });
  b.def("eta_surrogate", &bounds::eta_surrogate, py::arg("p"), py::arg("s"), py::arg("r"), py::arg("rho"));
  b.def("worst_case_eta_bound", &bounds::worst_case_eta_bound, py::arg("p"), py::arg("s"), py::arg("r"),
        py::arg("rho"));
  b.def("binomial_lower_tail", &bounds::binomial_lower_tail, py::arg("s"), py::arg("k_max"), py::arg("q"));
  b.def("s_min_main", &bounds::s_min_main);
  b.def("s_min_appendix", &bounds::s_min_appendix);
  b.def("s_min_hessian", &bounds::s_min_hessian);
  b.def("s_min_hoeffding", &bounds::s_min_hoeffding);
  b.def("generalization_bound", &bounds::generalization_bound, py::arg("l"), py::arg("R"), py::arg("gamma"),
        py::arg("slack_norm_sq"), py::arg("delta"), py::arg("c") = 1.0);
  b.def("translate_error_rate", &bounds::translate_error_rate);
  b.def("phi", [](double eps, double p, double rho, double beta, double eta, double delta) {
    return bounds::phi(eps, p, rho, beta, eta, delta).value;
  });

  m.def(
      "run_experiment",
      [](const std::string& spec_json) {
        const ExperimentSpec spec = experiment_spec_from_json(spec_json);
        ExperimentReport report;
        {
          py::gil_scoped_release release;
          report = run_experiment(spec);
        }
        return py::make_tuple(report_csv(report), report_json(report), report.all_succeeded());
      },
      py::arg("spec_json"), "Run a JSON experiment spec; returns (csv, json, all_succeeded).");
}
