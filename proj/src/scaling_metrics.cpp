#include "wps/scaling_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <random>

#include "nelder_mead.hpp"
#include "parallel.hpp"
#include "wps/error.hpp"

namespace wps {

void DissimilarityOptions::validate() const {
  if (!(r_min > 0.0) || !(r_max > r_min)) throw InvalidArgument("dissimilarity: radial grid bounds must satisfy 0 < r_min < r_max");
  if (r_count < 2 || angle_grid_count < 2) throw InvalidArgument("dissimilarity: grid counts must be >= 2");
  if (refine_iters < 0) throw InvalidArgument("dissimilarity: refine_iters must be >= 0");
  if (!(tol > 0.0)) throw InvalidArgument("dissimilarity: tol must be positive");
}

void RationalScanOptions::validate() const {
  if (height_bound < 1) throw InvalidArgument("rational scan: height bound must be >= 1");
}

namespace {

// A common unit factor leaves the norm unchanged, so
// || l.z - mu.w || = || (l/mu).z - w || and phi can be fixed at 0.
struct PinnedObjective {
  const Weights& q;
  const CVec& z;
  const CVec& w;

  double operator()(double log_r, double theta) const {
    double s = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
      const double qk = q[k];
      s += std::norm(std::polar(std::exp(qk * log_r), qk * theta) * z[k] - w[k]);
    }
    return std::sqrt(s);
  }
};

constexpr std::size_t kRefineStarts = 8;

}  // namespace

double pinned_dissimilarity(const ProjPoint& z, const ProjPoint& w, const DissimilarityOptions& opts) {
  require_same_weights(z.weights(), w.weights());
  opts.validate();
  const PinnedObjective f{z.weights(), z.coords(), w.coords()};

  // theta gets the resolution the (theta, phi) product grid would have had
  const int n_theta = opts.angle_grid_count * opts.angle_grid_count;
  const double lo = std::log(opts.r_min), hi = std::log(opts.r_max);
  const double dlog = (hi - lo) / (opts.r_count - 1);
  const double dang = 2.0 * std::numbers::pi / n_theta;

  struct GridPoint {
    double value;
    double log_r, theta;
  };
  std::vector<GridPoint> grid;
  grid.reserve(static_cast<std::size_t>(opts.r_count) * n_theta + 1);
  // l = mu = 1 is always feasible
  grid.push_back({f(0.0, 0.0), 0.0, 0.0});
  for (int a = 0; a < opts.r_count; ++a) {
    const double log_r = lo + a * dlog;
    for (int b = 0; b < n_theta; ++b) grid.push_back({f(log_r, b * dang), log_r, b * dang});
  }
  const std::size_t starts = std::min(kRefineStarts, grid.size());
  std::partial_sort(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(starts), grid.end(),
                    [](const GridPoint& x, const GridPoint& y) { return x.value < y.value; });

  double best = grid.front().value;
  if (opts.refine_iters > 0) {
    auto objective = [&](const std::vector<double>& x) { return f(x[0], x[1]); };
    for (std::size_t s = 0; s < starts; ++s) {
      const auto res =
          detail::nelder_mead(objective, {grid[s].log_r, grid[s].theta}, {dlog, dang}, opts.refine_iters, opts.tol);
      best = std::min(best, res.value);
    }
  }
  return best;
}

double dissimilarity(const ProjPoint& p1, const ProjPoint& p2, const DissimilarityOptions& opts) {
  require_same_weights(p1.weights(), p2.weights());
  const ProjPoint z = opts.normalize_inputs ? normalize_geometric(p1) : p1;
  const ProjPoint w = opts.normalize_inputs ? normalize_geometric(p2) : p2;
  const double forward = pinned_dissimilarity(z, w, opts);
  if (!opts.symmetric) return forward;
  return std::min(forward, pinned_dissimilarity(w, z, opts));
}

std::vector<double> rational_scalars(const RationalScanOptions& opts) {
  opts.validate();
  std::vector<double> out;
  for (int a = 1; a <= opts.height_bound; ++a) {
    for (int b = 1; b <= opts.height_bound; ++b) {
      if (std::gcd(a, b) != 1) continue;
      const double v = static_cast<double>(a) / b;
      out.push_back(v);
      if (opts.include_negative) out.push_back(-v);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double dissimilarity_rational(const RatProjPoint& p1, const RatProjPoint& p2, const RationalScanOptions& opts) {
  require_same_weights(p1.weights(), p2.weights());
  if (!p1.normalized() || !p2.normalized())
    throw PreconditionError("rational dissimilarity expects wgcd-normalized representatives");
  const Weights& q = p1.weights();
  const std::size_t dim = q.size();
  const std::vector<double> scalars = rational_scalars(opts);

  std::vector<double> x(dim), y(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    x[i] = p1[i].convert_to<double>();
    y[i] = p2[i].convert_to<double>();
  }
  // scaled[s * dim + i] = scalar_s^{q_i} * coordinate_i
  auto scale_all = [&](const std::vector<double>& v) {
    std::vector<double> out(scalars.size() * dim);
    for (std::size_t s = 0; s < scalars.size(); ++s)
      for (std::size_t i = 0; i < dim; ++i) out[s * dim + i] = std::pow(scalars[s], q[i]) * v[i];
    return out;
  };
  const std::vector<double> sx = scale_all(x), sy = scale_all(y);

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < scalars.size(); ++a) {
    const double* u = &sx[a * dim];
    for (std::size_t b = 0; b < scalars.size(); ++b) {
      const double* v = &sy[b * dim];
      double s = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        const double diff = u[i] - v[i];
        s += diff * diff;
      }
      best = std::min(best, s);
    }
  }
  return std::sqrt(best);
}

ViolationReport triangle_violation_scan(std::size_t n_points, const PairOracle& metric, std::size_t trials,
                                        std::uint64_t seed, double tol, unsigned parallelism) {
  if (n_points < 3) throw InvalidArgument("triangle scan needs at least three points");
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n_points - 1);
  std::vector<std::array<std::size_t, 3>> triples(trials);
  for (auto& t : triples) {
    t[0] = pick(gen);
    do t[1] = pick(gen); while (t[1] == t[0]);
    do t[2] = pick(gen); while (t[2] == t[0] || t[2] == t[1]);
  }

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> slot;
  for (const auto& t : triples) {
    slot.emplace(std::pair{t[0], t[2]}, 0);
    slot.emplace(std::pair{t[0], t[1]}, 0);
    slot.emplace(std::pair{t[1], t[2]}, 0);
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(slot.size());
  for (auto& [key, idx] : slot) {
    idx = pairs.size();
    pairs.push_back(key);
  }
  std::vector<double> values(pairs.size());
  detail::parallel_for(pairs.size(), parallelism,
                       [&](std::size_t p) { values[p] = metric(pairs[p].first, pairs[p].second); });
  auto dist = [&](std::size_t a, std::size_t b) { return values[slot.at({a, b})]; };

  ViolationReport report;
  report.trials = trials;
  report.seed = seed;
  report.tol = tol;
  bool first = true;
  for (const auto& t : triples) {
    const double num = dist(t[0], t[2]);
    const double den = dist(t[0], t[1]) + dist(t[1], t[2]);
    TripleRatio tr{t[0], t[1], t[2], 0.0};
    if (den == 0.0) {
      report.zero_denominator.push_back(tr);
    } else {
      tr.ratio = num / den;
      if (tr.ratio > 1.0 + tol) report.violations.push_back(tr);
    }
    if (first || tr.ratio > report.max_ratio) {
      report.max_ratio = tr.ratio;
      report.argmax = t;
      first = false;
    }
  }
  return report;
}

ViolationReport triangle_violation_scan(const std::vector<ProjPoint>& points,
                                        const std::function<double(const ProjPoint&, const ProjPoint&)>& metric,
                                        std::size_t trials, std::uint64_t seed, double tol, unsigned parallelism) {
  if (points.size() < 3) throw InvalidArgument("triangle scan needs at least three points");
  for (const auto& p : points) require_same_weights(points.front().weights(), p.weights());
  return triangle_violation_scan(
      points.size(), [&](std::size_t i, std::size_t j) { return metric(points[i], points[j]); }, trials, seed, tol,
      parallelism);
}

}  // namespace wps
