#include "json.hpp"

#include "subsvms/error.hpp"
#include "subsvms/svm.hpp"

namespace subsvms {

using nlohmann::json;

std::string model_to_json(const SvmModel& model) {
  json sv = json::array();
  for (const auto& s : model.support_vectors) {
    json feats = json::array();
    for (const auto& e : s.x.entries())
      if (e.value != 0.0) feats.push_back({e.index, e.value});
    sv.push_back({{"index", s.index}, {"label", s.label}, {"alpha", s.alpha}, {"features", feats}});
  }
  json kernel = {{"kind", to_string(model.kernel.kind)}};
  if (model.kernel.kind == KernelKind::rbf) kernel["sigma_sq"] = model.kernel.sigma_sq;
  json j = {{"format", "subsvms-model"},
            {"version", 1},
            {"kernel", kernel},
            {"bias", model.bias},
            {"degenerate", model.degenerate},
            {"slack_norm_sq", model.slack_norm_sq},
            {"support_vectors", sv}};
  return j.dump(2);
}

SvmModel model_from_json(const std::string& text) {
  try {
    json j = json::parse(text);
    if (j.value("format", "") != "subsvms-model") throw InvalidArgument("not a subsvms model file");
    SvmModel m;
    const auto& k = j.at("kernel");
    m.kernel.kind = kernel_kind_from_string(k.at("kind").get<std::string>());
    if (m.kernel.kind == KernelKind::rbf) m.kernel.sigma_sq = k.at("sigma_sq").get<double>();
    m.kernel.validate();
    m.bias = j.at("bias").get<double>();
    m.degenerate = j.value("degenerate", false);
    m.slack_norm_sq = j.value("slack_norm_sq", 0.0);
    for (const auto& s : j.at("support_vectors")) {
      std::vector<Feature> entries;
      for (const auto& f : s.at("features"))
        entries.push_back({f.at(0).get<std::uint32_t>(), f.at(1).get<double>()});
      m.support_vectors.push_back({s.at("index").get<std::size_t>(), FeatureVector(std::move(entries)),
                                   s.at("label").get<int>(), s.at("alpha").get<double>()});
    }
    return m;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad model json: ") + e.what());
  }
}

}  // namespace subsvms
