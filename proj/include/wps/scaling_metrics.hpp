#pragma once

// Scaling-infimum dissimilarities on P_q and the triangle-inequality scanner.
//
// The raw infimum over independent scalings (l, mu) of both points is
// identically zero (shrink both representatives jointly), so one scalar is
// pinned to the unit circle:
//
//   d_mu(z, w) = min over l in C*, |mu| = 1 of || l.z - mu.w ||
//
// which is the Euclidean distance from w to the closure of the orbit of z.
// That quantity is not symmetric; `dissimilarity` returns the minimum of the
// two pinned problems unless `symmetric` is switched off.

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "wps/core.hpp"

namespace wps {

struct DissimilarityOptions {
  bool normalize_inputs = true;
  double r_min = 1e-3;
  double r_max = 1e3;
  int r_count = 25;
  int angle_grid_count = 16;
  int refine_iters = 200;
  double tol = 1e-9;
  /// min of both pinned problems; false pins |mu| = 1 only
  bool symmetric = true;

  void validate() const;
};

/// One pinned problem: min over (r, theta, phi) of
/// || (r e^{i theta}) . z - (e^{i phi}) . w || (plain Euclidean norm).
/// Only l / mu matters, so the search runs over (log r, theta) with phi = 0;
/// the theta grid has angle_grid_count^2 points.
double pinned_dissimilarity(const ProjPoint& z, const ProjPoint& w, const DissimilarityOptions& opts);

double dissimilarity(const ProjPoint& p1, const ProjPoint& p2, const DissimilarityOptions& opts = {});

struct RationalScanOptions {
  int height_bound = 50;
  bool include_negative = true;

  void validate() const;
};

/// Reduced fractions a/b with 1 <= a, b <= H (and their negatives when
/// requested), ascending.
std::vector<double> rational_scalars(const RationalScanOptions& opts);

/// min over l, mu in the scalar set of (sum_i |l^{q_i} x_i - mu^{q_i} y_i|^2)^{1/2}.
/// Both inputs must be wgcd-normalized.
double dissimilarity_rational(const RatProjPoint& p1, const RatProjPoint& p2, const RationalScanOptions& opts = {});

struct TripleRatio {
  std::size_t i = 0, j = 0, k = 0;
  double ratio = 0.0;
};

struct ViolationReport {
  double max_ratio = 0.0;
  std::array<std::size_t, 3> argmax{};
  std::vector<TripleRatio> violations;
  /// triples whose denominator d(u,v) + d(v,w) vanished
  std::vector<TripleRatio> zero_denominator;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
};

using PairOracle = std::function<double(std::size_t, std::size_t)>;

/// Samples `trials` triples of distinct indices (u, v, w) and records
/// d(u,w) / (d(u,v) + d(v,w)). Each ordered pair is evaluated once;
/// evaluation may be spread over `parallelism` threads without changing
/// the result.
ViolationReport triangle_violation_scan(std::size_t n_points, const PairOracle& metric, std::size_t trials,
                                        std::uint64_t seed, double tol = 1e-9, unsigned parallelism = 1);

ViolationReport triangle_violation_scan(const std::vector<ProjPoint>& points,
                                        const std::function<double(const ProjPoint&, const ProjPoint&)>& metric,
                                        std::size_t trials, std::uint64_t seed, double tol = 1e-9,
                                        unsigned parallelism = 1);

}  // namespace wps
