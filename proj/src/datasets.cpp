#include "wps/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "format.hpp"
#include "wps/error.hpp"

namespace wps {

void SyntheticOptions::validate() const {
  if (n_clusters < 1) throw InvalidArgument("synthetic clusters: n_clusters must be >= 1");
  if (per_cluster < 1) throw InvalidArgument("synthetic clusters: per_cluster must be >= 1");
  if (!(spread > 0.0) || !std::isfinite(spread)) throw InvalidArgument("synthetic clusters: spread must be > 0");
  if (!(min_separation >= 0.0)) throw InvalidArgument("synthetic clusters: min_separation must be >= 0");
}

void ModuliOptions::validate() const {
  if (count < 1) throw InvalidArgument("moduli points: count must be >= 1");
  if (!(height_bound >= 1.0) || !std::isfinite(height_bound))
    throw InvalidArgument("moduli points: height bound must be >= 1");
  if (attempts_per_point < 1) throw InvalidArgument("moduli points: attempts_per_point must be >= 1");
}

LabeledDataset<ProjPoint> gen_synthetic_clusters(const Weights& q, const SyntheticOptions& opts) {
  opts.validate();
  std::mt19937_64 gen(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t dim = q.size();
  auto gaussian = [&](double scale) {
    CVec v(dim);
    for (auto& c : v) {
      const double re = normal(gen);
      c = {re * scale, normal(gen) * scale};
    }
    return v;
  };

  std::vector<ProjPoint> centers;
  for (int attempt = 0; centers.size() < opts.n_clusters; ++attempt) {
    if (attempt == 10000) throw InvalidArgument("synthetic clusters: cannot place centers with the requested separation");
    CVec c = gaussian(1.0);
    if (weighted_norm(q, c) == 0.0) continue;
    const ProjPoint candidate = normalize_geometric(ProjPoint(q, std::move(c)));
    bool separated = true;
    for (const auto& other : centers) separated = separated && chord_distance(candidate, other) >= opts.min_separation;
    if (separated) centers.push_back(candidate);
  }

  LabeledDataset<ProjPoint> out;
  out.weights = q;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    for (std::size_t i = 0; i < opts.per_cluster; ++i) {
      CVec v;
      do {
        v = gaussian(opts.spread);
        for (std::size_t k = 0; k < dim; ++k) v[k] += centers[c][k];
      } while (weighted_norm(q, v) == 0.0);
      out.points.push_back(normalize_geometric(ProjPoint(q, std::move(v))));
      out.labels.push_back(c);
    }
  }
  out.meta = {{"generator", "synthetic-clusters"},
              {"n_clusters", std::to_string(opts.n_clusters)},
              {"per_cluster", std::to_string(opts.per_cluster)},
              {"spread", detail::format_double(opts.spread)},
              {"min_separation", detail::format_double(opts.min_separation)},
              {"seed", std::to_string(opts.seed)}};
  return out;
}

namespace {

// Uniform integer in [-bound, bound] by rejection on random 64-bit limbs.
BigInt uniform_symmetric(std::mt19937_64& gen, const BigInt& bound) {
  const BigInt range = 2 * bound + 1;
  const unsigned bits = boost::multiprecision::msb(range) + 1;
  for (;;) {
    BigInt r = 0;
    for (unsigned got = 0; got < bits; got += 64) r = (r << 64) | BigInt(gen());
    r &= (BigInt(1) << bits) - 1;
    if (r < range) return r - bound;
  }
}

// floor(h^e) computed exactly from the binary value of h.
BigInt floor_power(double h, int e) {
  const BigRational base(h);
  BigRational p = 1;
  for (int i = 0; i < e; ++i) p *= base;
  return numerator(p) / denominator(p);
}

const Weights& igusa_weights() {
  static const Weights w{2, 4, 6, 10};
  return w;
}

}  // namespace

LabeledDataset<RatProjPoint> gen_moduli_points(const ModuliOptions& opts) {
  opts.validate();
  const Weights& q = igusa_weights();
  std::vector<BigInt> bounds;
  for (int w : q) bounds.push_back(floor_power(opts.height_bound, w));

  std::mt19937_64 gen(opts.seed);
  LabeledDataset<RatProjPoint> out;
  out.weights = q;
  std::set<std::vector<BigInt>> seen;
  const std::size_t budget = opts.count * opts.attempts_per_point;
  std::size_t attempts = 0;
  while (out.points.size() < opts.count && attempts < budget) {
    ++attempts;
    std::vector<BigInt> x(q.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = uniform_symmetric(gen, bounds[i]);
    if (std::all_of(x.begin(), x.end(), [](const BigInt& v) { return v == 0; })) continue;
    RatProjPoint p = normalize_rational(RatProjPoint(q, std::move(x)));
    if (weighted_height(p) > opts.height_bound) continue;
    if (!seen.insert(p.coords()).second) continue;
    out.points.push_back(std::move(p));
    out.labels.push_back(0);
  }
  out.meta = {{"generator", "moduli-points"},
              {"count", std::to_string(opts.count)},
              {"height_bound", detail::format_double(opts.height_bound)},
              {"seed", std::to_string(opts.seed)},
              {"attempts", std::to_string(attempts)},
              {"exhausted", out.points.size() < opts.count ? "true" : "false"}};
  return out;
}

BigRational absolute_invariant_t1_exact(const Weights& q, std::span<const BigRational> x) {
  if (q != igusa_weights()) throw WeightMismatch("t_1 is defined on P_(2,4,6,10) only");
  if (x.size() != q.size()) throw InvalidArgument("t_1: expected four coordinates");
  if (x[3] == 0) throw UndefinedInvariant("t_1 is undefined when J_10 = 0");
  const BigRational& j2 = x[0];
  return j2 * j2 * j2 * j2 * j2 / x[3];
}

BigRational absolute_invariant_t1_exact(const RatProjPoint& p) {
  std::vector<BigRational> x(p.coords().begin(), p.coords().end());
  return absolute_invariant_t1_exact(p.weights(), x);
}

double absolute_invariant_t1(const RatProjPoint& p) { return absolute_invariant_t1_exact(p).convert_to<double>(); }

}  // namespace wps
