#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "subsvms/kernel.hpp"

namespace subsvms {

struct Feature {
  std::uint32_t index;  // 1-based
  double value;
  bool operator==(const Feature&) const = default;
};

// Sparse feature vector with strictly increasing 1-based indices and finite
// values. Explicit zeros are allowed in storage but ignored by comparison
// and dropped on write.
class FeatureVector {
 public:
  FeatureVector() = default;
  explicit FeatureVector(std::vector<Feature> entries);
  static FeatureVector dense(std::span<const double> values);

  std::span<const Feature> entries() const noexcept { return entries_; }
  std::uint32_t max_index() const noexcept { return entries_.empty() ? 0 : entries_.back().index; }
  double squared_norm() const noexcept { return squared_norm_; }
  // Value at a 1-based index (0 when absent).
  double operator[](std::uint32_t index) const noexcept;

  FeatureVector canonical() const;
  bool operator==(const FeatureVector& other) const;

 private:
  std::vector<Feature> entries_;
  double squared_norm_ = 0.0;
};

double dot(const FeatureVector& a, const FeatureVector& b) noexcept;
double squared_distance(const FeatureVector& a, const FeatureVector& b) noexcept;

inline constexpr int kPositive = +1;
inline constexpr int kNegative = -1;

// Immutable labelled point set. Feature storage is shared between a dataset
// and datasets derived from it by relabelling, so corrupt/correct are cheap.
class LabeledDataset {
 public:
  LabeledDataset() = default;
  LabeledDataset(std::vector<FeatureVector> features, std::vector<int> labels,
                 std::uint32_t dimension = 0);

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  std::uint32_t dimension() const noexcept { return dimension_; }
  const FeatureVector& x(std::size_t i) const { return (*features_)[i]; }
  int y(std::size_t i) const { return labels_[i]; }
  std::span<const int> labels() const noexcept { return labels_; }
  std::span<const FeatureVector> features() const noexcept;

  // Same features (shared), new labels.
  LabeledDataset with_labels(std::vector<int> labels) const;
  // Copy of the selected rows, in the given order (duplicates allowed).
  LabeledDataset subset(std::span<const std::size_t> indices) const;
  bool same_features(const LabeledDataset& other) const;

  bool operator==(const LabeledDataset& other) const;

 private:
  std::shared_ptr<const std::vector<FeatureVector>> features_ =
      std::make_shared<const std::vector<FeatureVector>>();
  std::vector<int> labels_;
  std::uint32_t dimension_ = 0;
};

struct ClassStats {
  int minority_label = kPositive;
  std::size_t minority_count = 0;
  std::size_t majority_count = 0;
  double beta = 0.0;
  std::vector<std::size_t> minority_indices;
  std::vector<std::size_t> majority_indices;

  int majority_label() const noexcept { return -minority_label; }
};

// Labels {0,1} are mapped to {-1,+1}; blank lines and CRLF are accepted.
LabeledDataset parse_libsvm(std::string_view text);
LabeledDataset read_libsvm_file(const std::string& path);
std::string write_libsvm(const LabeledDataset& d);
void write_libsvm_file(const LabeledDataset& d, const std::string& path);

// Exact ties resolve the minority to +1.
ClassStats class_stats(const LabeledDataset& d);
ClassStats class_stats(std::span<const int> labels);

// Largest feature-space norm sqrt(K(x, x)) over the points.
double estimate_radius(const LabeledDataset& d, const KernelSpec& kernel);
// Geometric margin 1/||w|| of the hard-margin solution. Throws
// NonSeparableError when no separating solution is found.
double estimate_margin(const LabeledDataset& d, const KernelSpec& kernel);

}  // namespace subsvms
