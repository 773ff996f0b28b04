#pragma once

// Seeded synthetic point sets: Gaussian clusters in P_q, uniform integer
// points of P_(2,4,6,10) under a height bound, and the invariant t_1.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "wps/core.hpp"
#include "wps/finsler.hpp"

namespace wps {

template <class Point>
struct LabeledDataset {
  Weights weights;
  std::vector<Point> points;
  std::vector<std::size_t> labels;
  /// generator name, parameters and seed, as strings
  std::map<std::string, std::string> meta;
};

struct SyntheticOptions {
  std::size_t n_clusters = 3;
  std::size_t per_cluster = 30;
  double spread = 0.01;
  std::uint64_t seed = 0;
  /// centers closer than this in chord distance are redrawn
  double min_separation = 0.25;

  void validate() const;
};

/// Centers are complex Gaussian vectors scaled to weighted norm 1; member
/// i of a cluster is center + spread * N(0, 1) per real component,
/// rescaled to weighted norm 1. Points are ordered by cluster. Throws
/// InvalidArgument if the centers cannot be separated in 10000 draws.
LabeledDataset<ProjPoint> gen_synthetic_clusters(const Weights& q, const SyntheticOptions& opts);

struct ModuliOptions {
  std::size_t count = 100;
  double height_bound = 2.0;
  std::uint64_t seed = 0;
  /// sampling attempts per requested point before giving up
  std::size_t attempts_per_point = 100;

  void validate() const;
};

/// Uniform integer tuples with |x_i| <= floor(H^{q_i}) for q = (2,4,6,10),
/// wgcd-normalized and deduplicated by canonical representative. Stops
/// early when the attempts run out (meta["exhausted"] = "true"); small H
/// have only a few classes (80 for H = 1). All labels are 0.
LabeledDataset<RatProjPoint> gen_moduli_points(const ModuliOptions& opts);

/// x_0^5 / x_3 exactly. Throws WeightMismatch unless q = (2,4,6,10) and
/// UndefinedInvariant if x_3 = 0.
BigRational absolute_invariant_t1_exact(const Weights& q, std::span<const BigRational> x);
BigRational absolute_invariant_t1_exact(const RatProjPoint& p);
double absolute_invariant_t1(const RatProjPoint& p);

}  // namespace wps
