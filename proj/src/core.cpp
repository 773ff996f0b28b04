#include "wps/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "arith.hpp"
#include "wps/error.hpp"

namespace wps {

namespace {

// Binary exponentiation; negative exponents invert.
Complex cpow(Complex base, long long e) {
  if (e < 0) return 1.0 / cpow(base, -e);
  Complex acc{1.0, 0.0};
  while (e > 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

}  // namespace

Weights::Weights(std::vector<int> q) : q_(std::move(q)) {
  if (q_.size() < 2) throw InvalidArgument("weights: need at least two grades");
  for (int v : q_) {
    if (v < 1) throw InvalidArgument("weights: every grade must be a positive integer");
  }
}

std::int64_t Weights::lcm() const {
  std::int64_t l = 1;
  for (int v : q_) l = std::lcm(l, static_cast<std::int64_t>(v));
  return l;
}

void require_same_weights(const Weights& a, const Weights& b) {
  if (!(a == b)) throw WeightMismatch("points live in different weighted projective spaces");
}

ProjPoint::ProjPoint(Weights w, CVec coords) : weights_(std::move(w)), coords_(std::move(coords)) {
  if (coords_.size() != weights_.size())
    throw InvalidPoint("coordinate count does not match the number of weights");
  bool nonzero = false;
  for (const auto& c : coords_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw InvalidPoint("non-finite coordinate");
    nonzero = nonzero || c != Complex{};
  }
  if (!nonzero) throw InvalidPoint("all coordinates are zero");
}

RatProjPoint::RatProjPoint(Weights w, std::vector<BigInt> coords)
    : weights_(std::move(w)), coords_(std::move(coords)) {
  if (coords_.size() != weights_.size())
    throw InvalidPoint("coordinate count does not match the number of weights");
  if (std::all_of(coords_.begin(), coords_.end(), [](const BigInt& x) { return x == 0; }))
    throw InvalidPoint("all coordinates are zero");
  normalized_ = wgcd(coords_, weights_) == 1;
}

ProjPoint RatProjPoint::to_complex() const {
  CVec z;
  z.reserve(coords_.size());
  for (const auto& x : coords_) z.emplace_back(x.convert_to<double>(), 0.0);
  return ProjPoint(weights_, std::move(z));
}

RatProjPoint make_rational(Weights w, std::initializer_list<long long> coords) {
  std::vector<BigInt> x;
  for (long long c : coords) x.emplace_back(c);
  return RatProjPoint(std::move(w), std::move(x));
}

Tangent::Tangent(ProjPoint b, CVec vec) : base(std::move(b)), v(std::move(vec)) {
  if (v.size() != base.size()) throw InvalidArgument("tangent length does not match its base point");
}

double weighted_norm(const Weights& q, std::span<const Complex> z) {
  double s = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) s += q[k] * std::norm(z[k]);
  return std::sqrt(s);
}

double weighted_norm(const ProjPoint& p) { return weighted_norm(p.weights(), p.coords()); }

Complex weighted_inner(const Weights& q, std::span<const Complex> a, std::span<const Complex> b) {
  Complex s{};
  for (std::size_t k = 0; k < a.size(); ++k) s += static_cast<double>(q[k]) * a[k] * std::conj(b[k]);
  return s;
}

ProjPoint normalize_geometric(const ProjPoint& p) {
  const Weights& q = p.weights();
  std::vector<double> w(p.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = q[k] * std::norm(p[k]);
  // h(s) = log sum_k w_k e^{2 q_k s} is convex and increasing; Newton from
  // the equal-weight guess converges monotonically after at most one step.
  double s = -std::log(weighted_norm(p)) / q.lcm();
  for (int it = 0; it < 100; ++it) {
    double f = 0.0, df = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double t = w[k] * std::exp(2.0 * q[k] * s);
      f += t;
      df += 2.0 * q[k] * t;
    }
    const double step = std::log(f) * f / df;
    s -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(s))) break;
  }
  CVec z = p.coords();
  for (std::size_t k = 0; k < z.size(); ++k) z[k] *= std::exp(q[k] * s);
  return ProjPoint(q, std::move(z));
}

CVec act(const Weights& q, std::span<const Complex> z, Complex lambda) {
  if (lambda == Complex{}) throw InvalidScalar("scaling action needs a nonzero scalar");
  CVec out(z.begin(), z.end());
  for (std::size_t k = 0; k < out.size(); ++k) {
    // integer exponent: single-valued regardless of the branch of log(lambda)
    out[k] *= cpow(lambda, q[k]);
  }
  return out;
}

ProjPoint act(const ProjPoint& p, Complex lambda) {
  return ProjPoint(p.weights(), act(p.weights(), p.coords(), lambda));
}

BigInt wgcd(std::span<const BigInt> x, const Weights& q) {
  if (x.size() != q.size()) throw InvalidPoint("coordinate count does not match the number of weights");
  BigInt g = 0;
  for (const auto& xi : x) g = boost::multiprecision::gcd(g, xi);
  if (g == 0) throw InvalidPoint("wgcd of the zero vector is undefined");
  if (g < 0) g = -g;
  BigInt d = 1;
  for (const auto& [prime, unused] : detail::factorize(g)) {
    int e = -1;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0) continue;
      const int ei = detail::valuation(x[i], prime) / q[i];
      e = e < 0 ? ei : std::min(e, ei);
    }
    if (e > 0) d *= detail::ipow(prime, static_cast<unsigned>(e));
  }
  return d;
}

RatProjPoint normalize_rational(const RatProjPoint& p) {
  const Weights& q = p.weights();
  const BigInt d = wgcd(p.coords(), q);
  std::vector<BigInt> y = p.coords();
  if (d != 1) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] /= detail::ipow(d, static_cast<unsigned>(q[i]));
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (q[i] % 2 == 1 && y[i] != 0) {
      if (y[i] < 0) {
        for (std::size_t k = 0; k < y.size(); ++k)
          if (q[k] % 2 == 1) y[k] = -y[k];
      }
      break;
    }
  }
  return RatProjPoint(q, std::move(y));
}

namespace {

// |x|^{1/k}, exact when |x| is a perfect k-th power.
double integer_root(BigInt x, int k) {
  if (x < 0) x = -x;
  if (x == 0) return 0.0;
  const long double xl = x.convert_to<long double>();
  if (k == 2) return static_cast<double>(std::sqrt(xl));
  // one Newton step in extended precision polishes exp(log(x) / k)
  long double r = std::exp(std::log(xl) / k);
  r -= (std::pow(r, k) - xl) / (k * std::pow(r, k - 1));
  const double approx = static_cast<double>(r);
  const BigInt c0(static_cast<long long>(std::llround(approx)));
  for (BigInt c = (c0 > 1 ? c0 - 1 : BigInt(1)); c <= c0 + 1; ++c) {
    if (detail::ipow(c, static_cast<unsigned>(k)) == x) return c.convert_to<double>();
  }
  return approx;
}

}  // namespace

double weighted_height(const RatProjPoint& p) {
  const RatProjPoint canon = p.normalized() ? p : normalize_rational(p);
  double h = 0.0;
  for (std::size_t i = 0; i < canon.size(); ++i) h = std::max(h, integer_root(canon[i], canon.weights()[i]));
  return h;
}

bool equivalent(const ProjPoint& p1, const ProjPoint& p2, double tol) {
  require_same_weights(p1.weights(), p2.weights());
  const Weights& q = p1.weights();
  const double n1 = weighted_norm(p1), n2 = weighted_norm(p2);
  std::vector<std::size_t> support;
  for (std::size_t k = 0; k < q.size(); ++k) {
    const bool z0 = std::abs(p1[k]) <= tol * n1;
    const bool w0 = std::abs(p2[k]) <= tol * n2;
    if (z0 != w0) return false;
    if (!z0) support.push_back(k);
  }
  // Ratios r_k = w_k / z_k must all be l^{q_k} for one l. With g the gcd of
  // the supported grades and sum c_k q_k = g, l^g = prod r_k^{c_k} =: mu, and
  // the condition is r_k = mu^{q_k / g}. Only integer powers are taken.
  long long g = 0;
  std::vector<long long> coef(support.size(), 0);
  for (std::size_t s = 0; s < support.size(); ++s) {
    long long a = 0, b = 0;
    const long long qk = q[support[s]];
    const long long ng = detail::ext_gcd(g, qk, a, b);
    for (std::size_t t = 0; t < s; ++t) coef[t] *= a;
    coef[s] = b;
    g = ng;
  }
  Complex mu{1.0, 0.0};
  for (std::size_t s = 0; s < support.size(); ++s) {
    const std::size_t k = support[s];
    mu *= cpow(p2[k] / p1[k], coef[s]);
  }
  for (std::size_t k : support) {
    const Complex r = p2[k] / p1[k];
    const Complex pred = cpow(mu, q[k] / g);
    if (std::abs(r - pred) > tol * std::max(std::abs(r), std::abs(pred))) return false;
  }
  return true;
}

bool equivalent_rational(const RatProjPoint& p1, const RatProjPoint& p2) {
  require_same_weights(p1.weights(), p2.weights());
  return normalize_rational(p1).coords() == normalize_rational(p2).coords();
}

}  // namespace wps
