#include "subsvms/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "subsvms/error.hpp"

namespace subsvms {

FeatureVector::FeatureVector(std::vector<Feature> entries) : entries_(std::move(entries)) {
  std::uint32_t prev = 0;
  for (const auto& e : entries_) {
    if (e.index == 0) throw InvalidArgument("feature indices are 1-based");
    if (e.index <= prev) throw InvalidArgument("feature indices must be strictly increasing");
    if (!std::isfinite(e.value)) throw InvalidArgument("feature values must be finite");
    prev = e.index;
    squared_norm_ += e.value * e.value;
  }
}

FeatureVector FeatureVector::dense(std::span<const double> values) {
  std::vector<Feature> entries;
  entries.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    entries.push_back({static_cast<std::uint32_t>(i + 1), values[i]});
  return FeatureVector(std::move(entries));
}

double FeatureVector::operator[](std::uint32_t index) const noexcept {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                             [](const Feature& f, std::uint32_t i) { return f.index < i; });
  return (it != entries_.end() && it->index == index) ? it->value : 0.0;
}

FeatureVector FeatureVector::canonical() const {
  std::vector<Feature> kept;
  kept.reserve(entries_.size());
  for (const auto& e : entries_)
    if (e.value != 0.0) kept.push_back(e);
  return FeatureVector(std::move(kept));
}

bool FeatureVector::operator==(const FeatureVector& other) const {
  auto a = entries_.begin(), ae = entries_.end();
  auto b = other.entries_.begin(), be = other.entries_.end();
  for (;;) {
    while (a != ae && a->value == 0.0) ++a;
    while (b != be && b->value == 0.0) ++b;
    if (a == ae || b == be) return a == ae && b == be;
    if (a->index != b->index || a->value != b->value) return false;
    ++a;
    ++b;
  }
}

double dot(const FeatureVector& a, const FeatureVector& b) noexcept {
  auto ea = a.entries(), eb = b.entries();
  std::size_t i = 0, j = 0;
  double sum = 0.0;
  while (i < ea.size() && j < eb.size()) {
    if (ea[i].index == eb[j].index) {
      sum += ea[i++].value * eb[j++].value;
    } else if (ea[i].index < eb[j].index) {
      ++i;
    } else {
      ++j;
    }
  }
  return sum;
}

double squared_distance(const FeatureVector& a, const FeatureVector& b) noexcept {
  return std::max(0.0, a.squared_norm() + b.squared_norm() - 2.0 * dot(a, b));
}

LabeledDataset::LabeledDataset(std::vector<FeatureVector> features, std::vector<int> labels,
                               std::uint32_t dimension)
    : labels_(std::move(labels)) {
  if (features.size() != labels_.size())
    throw InvalidArgument("feature and label counts differ");
  std::uint32_t max_index = 0;
  for (const auto& f : features) max_index = std::max(max_index, f.max_index());
  if (dimension != 0 && max_index > dimension)
    throw InvalidArgument("feature index exceeds dataset dimension");
  for (int y : labels_)
    if (y != kPositive && y != kNegative) throw InvalidArgument("labels must be -1 or +1");
  dimension_ = dimension ? dimension : max_index;
  features_ = std::make_shared<const std::vector<FeatureVector>>(std::move(features));
}

std::span<const FeatureVector> LabeledDataset::features() const noexcept { return *features_; }

LabeledDataset LabeledDataset::with_labels(std::vector<int> labels) const {
  if (labels.size() != labels_.size()) throw InvalidArgument("label count mismatch");
  for (int y : labels)
    if (y != kPositive && y != kNegative) throw InvalidArgument("labels must be -1 or +1");
  LabeledDataset out;
  out.features_ = features_;
  out.labels_ = std::move(labels);
  out.dimension_ = dimension_;
  return out;
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
  std::vector<FeatureVector> xs;
  std::vector<int> ys;
  xs.reserve(indices.size());
  ys.reserve(indices.size());
  for (auto i : indices) {
    xs.push_back(x(i));
    ys.push_back(y(i));
  }
  return LabeledDataset(std::move(xs), std::move(ys), dimension_);
}

bool LabeledDataset::same_features(const LabeledDataset& other) const {
  if (features_ == other.features_) return true;
  return *features_ == *other.features_;
}

bool LabeledDataset::operator==(const LabeledDataset& other) const {
  return dimension_ == other.dimension_ && labels_ == other.labels_ && same_features(other);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc{} && ptr == tok.data() + tok.size();
}

int parse_label(std::string_view tok, std::size_t line) {
  double v;
  if (!parse_double(tok, v)) throw ParseError(line, "bad label '" + std::string(tok) + "'");
  if (v == 1.0) return kPositive;
  if (v == -1.0 || v == 0.0) return kNegative;
  throw ParseError(line, "unknown label value '" + std::string(tok) + "'");
}

}  // namespace

LabeledDataset parse_libsvm(std::string_view text) {
  std::vector<FeatureVector> xs;
  std::vector<int> ys;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;

    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
      auto end = pos;
      while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
      if (end > pos) tokens.push_back(line.substr(pos, end - pos));
      pos = end;
    }

    ys.push_back(parse_label(tokens.front(), line_no));
    std::vector<Feature> entries;
    entries.reserve(tokens.size() - 1);
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      auto tok = tokens[t];
      auto colon = tok.find(':');
      if (colon == std::string_view::npos)
        throw ParseError(line_no, "expected <index>:<value>, got '" + std::string(tok) + "'");
      std::uint32_t idx = 0;
      auto key = tok.substr(0, colon);
      auto [p, ec] = std::from_chars(key.data(), key.data() + key.size(), idx);
      if (ec != std::errc{} || p != key.data() + key.size() || idx == 0)
        throw ParseError(line_no, "bad feature index '" + std::string(key) + "'");
      double value;
      if (!parse_double(tok.substr(colon + 1), value) || !std::isfinite(value))
        throw ParseError(line_no, "bad feature value '" + std::string(tok) + "'");
      if (!entries.empty() && idx <= entries.back().index)
        throw ParseError(line_no, "feature indices must be strictly increasing");
      entries.push_back({idx, value});
    }
    xs.emplace_back(std::move(entries));
  }
  if (ys.empty()) throw ParseError(0, "empty dataset");
  return LabeledDataset(std::move(xs), std::move(ys));
}

LabeledDataset read_libsvm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_libsvm(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.what());
  }
}

std::string write_libsvm(const LabeledDataset& d) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < d.size(); ++i) {
    out += d.y(i) > 0 ? "+1" : "-1";
    for (const auto& e : d.x(i).entries()) {
      if (e.value == 0.0) continue;
      out += ' ';
      auto r = std::to_chars(buf, buf + sizeof buf, e.index);
      out.append(buf, r.ptr);
      out += ':';
      r = std::to_chars(buf, buf + sizeof buf, e.value);
      out.append(buf, r.ptr);
    }
    out += '\n';
  }
  return out;
}

void write_libsvm_file(const LabeledDataset& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << write_libsvm(d);
  if (!out) throw Error("write failed for '" + path + "'");
}

ClassStats class_stats(std::span<const int> labels) {
  ClassStats s;
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] > 0 ? pos : neg).push_back(i);
  if (pos.empty() || neg.empty()) throw InvalidArgument("dataset contains a single class");
  if (pos.size() <= neg.size()) {
    s.minority_label = kPositive;
    s.minority_indices = std::move(pos);
    s.majority_indices = std::move(neg);
  } else {
    s.minority_label = kNegative;
    s.minority_indices = std::move(neg);
    s.majority_indices = std::move(pos);
  }
  s.minority_count = s.minority_indices.size();
  s.majority_count = s.majority_indices.size();
  s.beta = static_cast<double>(s.minority_count) / static_cast<double>(labels.size());
  return s;
}

ClassStats class_stats(const LabeledDataset& d) { return class_stats(d.labels()); }

double estimate_radius(const LabeledDataset& d, const KernelSpec& kernel) {
  double r2 = 0.0;
  for (const auto& x : d.features()) r2 = std::max(r2, kernel(x, x));
  return std::sqrt(r2);
}

}  // namespace subsvms
