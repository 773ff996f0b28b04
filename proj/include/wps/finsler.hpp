#pragma once

// Finsler norm on P_q and geodesic distances by discrete path optimization.
//
// With A = sum q_k |v_k|^2, B = sum q_k |z_k|^2, C = |sum q_k z_k conj(v_k)|,
//
//   F(z, v) = A^{1/2} C / B.
//
// F is 2-homogeneous in v, so the discrete length below depends on the
// parameterization; paths always use M uniform parameter steps of 1/M.

#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "wps/core.hpp"

namespace wps {

using BigRational = boost::multiprecision::cpp_rational;

/// F evaluated on raw coordinate spans; B must be positive.
double finsler_integrand(const Weights& q, std::span<const Complex> z, std::span<const Complex> v);

double finsler_norm(const Tangent& t);
double finsler_norm(const ProjPoint& base, std::span<const Complex> v);

/// Rational variant: A, B and sum q_k x_k v_k evaluated exactly.
/// Throws PreconditionError if the base is not wgcd-normalized.
double finsler_norm_rational(const RatProjPoint& base, std::span<const BigRational> v);

/// Discretized lifted curve: M + 1 nonzero nodes in C^{n+1}.
class PiecewisePath {
 public:
  PiecewisePath() = default;
  PiecewisePath(Weights w, std::vector<CVec> nodes);

  const Weights& weights() const { return weights_; }
  const std::vector<CVec>& nodes() const { return nodes_; }
  std::size_t segments() const { return nodes_.size() - 1; }

  PiecewisePath reversed() const;

 private:
  Weights weights_;
  std::vector<CVec> nodes_;
};

/// Midpoint rule: sum_s F(mid_s, M (node_{s+1} - node_s)) / M.
/// Throws DegeneratePath if a midpoint vanishes.
double path_length(const PiecewisePath& path);

struct GeodesicOptions {
  int segments = 16;
  int max_iters = 500;
  double step = 0.1;
  double tol = 1e-8;
  int multistarts = 3;
  std::uint64_t seed = 0;
  /// record the accepted-step energies of the winning start
  bool keep_trace = false;

  void validate() const;
};

struct GeodesicResult {
  double distance = 0.0;
  PiecewisePath path;
  bool converged = false;
  int iterations = 0;
  /// length of the straight chord the optimizer started from
  double chord_length = 0.0;
  /// index of the start that produced `path`
  int best_start = 0;
  /// energies after each accepted step of the winning start (keep_trace)
  std::vector<double> trace;
};

/// Unit scalar e^{i psi} maximizing Re <z, e^{i psi} . w>_q.
Complex phase_alignment(const Weights& q, std::span<const Complex> z, std::span<const Complex> w);

/// Straight chord between the normalized p1 and the phase-aligned,
/// normalized p2. Throws DegeneratePath if it passes through the origin.
PiecewisePath initial_chord(const ProjPoint& p1, const ProjPoint& p2, int segments);

/// Euclidean length of that chord: the distance between normalized
/// representatives after phase alignment.
double chord_distance(const ProjPoint& p1, const ProjPoint& p2);

/// Gradient descent over interior nodes (central differences, backtracking)
/// from the chord and from `multistarts - 1` seeded perturbations of it;
/// the shortest result wins, ties to the lowest start index. A chord through
/// the origin is not used as a start (chord_length is then +inf); the
/// perturbed starts still run.
GeodesicResult geodesic_distance(const ProjPoint& p1, const ProjPoint& p2, const GeodesicOptions& opts = {});

/// Same machinery on the real wgcd-normalized integer representatives,
/// optimizing over real paths (F restricted to real coordinates is F_Q).
GeodesicResult geodesic_distance_rational(const RatProjPoint& p1, const RatProjPoint& p2,
                                          const GeodesicOptions& opts = {});

/// Optimizer entry point on an explicit starting path (endpoints fixed).
/// `real_only` keeps every node real.
GeodesicResult minimize_path(const PiecewisePath& start, const GeodesicOptions& opts, bool real_only = false);

}  // namespace wps
