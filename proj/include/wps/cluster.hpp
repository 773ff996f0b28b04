#pragma once

// Agglomerative hierarchical clustering over dense distance matrices,
// dendrogram cuts, a k-means baseline and partition agreement scores.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace wps {

/// Dense symmetric matrix with zero diagonal and nonnegative entries.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  /// n x n zero matrix.
  explicit DistanceMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}
  /// Row-major entries; throws InvalidArgument unless symmetric, finite,
  /// nonnegative with zero diagonal.
  DistanceMatrix(std::size_t n, std::vector<double> entries);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  /// Writes both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double v);
  const std::vector<double>& data() const { return data_; }

  /// Throws InvalidArgument if an invariant is broken.
  void validate() const;

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

enum class Linkage { single, complete, average };

std::string_view to_string(Linkage l);
/// Accepts "single", "complete", "average"; throws InvalidArgument otherwise.
Linkage parse_linkage(std::string_view s);

struct Merge {
  std::size_t left = 0;   // smaller id
  std::size_t right = 0;  // larger id
  double height = 0.0;
  std::size_t id = 0;

  friend bool operator==(const Merge&, const Merge&) = default;
};

struct Dendrogram {
  std::size_t n_leaves = 0;
  std::vector<Merge> merges;

  /// Checks ids, merge count and that every id is merged at most once.
  void validate() const;

  friend bool operator==(const Dendrogram&, const Dendrogram&) = default;
};

using PairDistance = std::function<double(std::size_t, std::size_t)>;

/// Evaluates oracle(i, j) once for every i < j and mirrors the value.
/// Pairs are spread over `parallelism` threads and stored by pair index,
/// so the matrix does not depend on the thread count. A throwing oracle or
/// a negative / non-finite value raises PairError for the lowest failing
/// pair.
DistanceMatrix distance_matrix(std::size_t n, const PairDistance& oracle, unsigned parallelism = 1);

/// Runs to a single cluster. At each step merges the active pair with the
/// smallest linkage value; ties go to the lexicographically smallest
/// (min_id, max_id). Leaves are 0..n-1, merge s creates id n + s.
Dendrogram agglomerate(const DistanceMatrix& m, Linkage linkage);

/// Leaf index -> cluster label.
using Partition = std::vector<std::size_t>;

/// Relabels so that labels appear in order of their smallest leaf.
Partition canonical_labels(const Partition& p);

/// Keeps the first n - k merges. Throws InvalidArgument unless 1 <= k <= n.
Partition cut_k(const Dendrogram& d, std::size_t k);

/// Keeps the merges with height <= threshold; a kept merge joins all
/// leaves of both children. Throws InvalidArgument for negative thresholds.
Partition cut_height(const Dendrogram& d, double threshold);

/// Newick string; leaves are named by index and branch lengths are merge
/// height differences (leaves sit at height 0).
std::string to_newick(const Dendrogram& d);

/// Lloyd iteration from a seeded farthest-first initialization, at most
/// 100 rounds. Returns canonical labels.
Partition kmeans_baseline(const std::vector<std::vector<double>>& coords, std::size_t k, std::uint64_t seed);

struct StabilityReport {
  Linkage linkage = Linkage::single;
  /// sup_{i,j} |A_ij - B_ij|
  double delta = 0.0;
  /// max_s |h_s(A) - h_s(B)| over the sorted merge heights
  double height_difference = 0.0;
  /// true only for single linkage, where the bound is a theorem
  bool asserted = false;
  bool within_bound = true;
};

/// Throws InvalidArgument if the sizes differ.
StabilityReport stability_check(const DistanceMatrix& a, const DistanceMatrix& b, Linkage linkage);

double rand_index(const Partition& a, const Partition& b);
double adjusted_rand_index(const Partition& a, const Partition& b);

}  // namespace wps
