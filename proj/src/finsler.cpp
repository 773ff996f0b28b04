#include "wps/finsler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "wps/error.hpp"

namespace wps {

double finsler_integrand(const Weights& q, std::span<const Complex> z, std::span<const Complex> v) {
  double a = 0.0, b = 0.0;
  Complex c{};
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double qk = q[k];
    a += qk * std::norm(v[k]);
    b += qk * std::norm(z[k]);
    c += qk * z[k] * std::conj(v[k]);
  }
  return std::sqrt(a) * std::abs(c) / b;
}

double finsler_norm(const ProjPoint& base, std::span<const Complex> v) {
  if (v.size() != base.size()) throw InvalidArgument("tangent length does not match its base point");
  return finsler_integrand(base.weights(), base.coords(), v);
}

double finsler_norm(const Tangent& t) { return finsler_norm(t.base, t.v); }

double finsler_norm_rational(const RatProjPoint& base, std::span<const BigRational> v) {
  if (!base.normalized()) throw PreconditionError("rational Finsler norm expects a wgcd-normalized base");
  if (v.size() != base.size()) throw InvalidArgument("tangent length does not match its base point");
  BigRational a = 0, c = 0;
  BigInt b = 0;
  const Weights& q = base.weights();
  for (std::size_t k = 0; k < v.size(); ++k) {
    a += q[k] * v[k] * v[k];
    b += q[k] * base[k] * base[k];
    c += q[k] * BigRational(base[k]) * v[k];
  }
  if (c < 0) c = -c;
  // sqrt(A) * C / B with A, C exact
  return std::sqrt(a.convert_to<double>()) * (c / BigRational(b)).convert_to<double>();
}

PiecewisePath::PiecewisePath(Weights w, std::vector<CVec> nodes) : weights_(std::move(w)), nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw InvalidArgument("path needs at least one segment");
  for (const auto& n : nodes_) {
    if (n.size() != weights_.size()) throw InvalidArgument("path node length does not match the weights");
    if (std::all_of(n.begin(), n.end(), [](const Complex& c) { return c == Complex{}; }))
      throw InvalidPoint("path node is the zero vector");
  }
}

PiecewisePath PiecewisePath::reversed() const {
  std::vector<CVec> r(nodes_.rbegin(), nodes_.rend());
  return PiecewisePath(weights_, std::move(r));
}

namespace {

// Nodes flattened as (node, coordinate, re/im).
struct FlatPath {
  const Weights* q = nullptr;
  std::size_t dim = 0;
  std::size_t segments = 0;
  std::vector<double> x;

  double re(std::size_t node, std::size_t k) const { return x[(node * dim + k) * 2]; }
  double im(std::size_t node, std::size_t k) const { return x[(node * dim + k) * 2 + 1]; }

  // F(mid_s, M * delta_s) / M; +inf on a vanishing midpoint.
  double segment(std::size_t s) const {
    const double m = static_cast<double>(segments);
    double a = 0.0, b = 0.0, cr = 0.0, ci = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double qk = (*q)[k];
      const double mr = 0.5 * (re(s, k) + re(s + 1, k)), mi = 0.5 * (im(s, k) + im(s + 1, k));
      const double vr = m * (re(s + 1, k) - re(s, k)), vi = m * (im(s + 1, k) - im(s, k));
      a += qk * (vr * vr + vi * vi);
      b += qk * (mr * mr + mi * mi);
      // m * conj(v)
      cr += qk * (mr * vr + mi * vi);
      ci += qk * (mi * vr - mr * vi);
    }
    if (b == 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(a) * std::hypot(cr, ci) / b / m;
  }

  double length() const {
    double total = 0.0;
    for (std::size_t s = 0; s < segments; ++s) total += segment(s);
    return total;
  }

  double node_norm(std::size_t node) const {
    double b = 0.0;
    for (std::size_t k = 0; k < dim; ++k) b += (*q)[k] * (re(node, k) * re(node, k) + im(node, k) * im(node, k));
    return std::sqrt(b);
  }
};

FlatPath flatten(const Weights& q, const std::vector<CVec>& nodes);

FlatPath flatten(const PiecewisePath& p) { return flatten(p.weights(), p.nodes()); }

PiecewisePath unflatten(const FlatPath& f) {
  std::vector<CVec> nodes(f.segments + 1, CVec(f.dim));
  for (std::size_t j = 0; j <= f.segments; ++j)
    for (std::size_t k = 0; k < f.dim; ++k) nodes[j][k] = {f.re(j, k), f.im(j, k)};
  return PiecewisePath(*f.q, std::move(nodes));
}

constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-20;
constexpr double kNodeGuard = 1e-6;
constexpr double kFdStep = 1e-6;
constexpr double kPerturbation = 0.05;
constexpr std::size_t kStopWindow = 10;

struct Descent {
  FlatPath path;
  double length = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<double> trace;
};

// Gradient descent on the interior nodes of `path`.
Descent descend(FlatPath path, const GeodesicOptions& opts, bool real_only, double scale) {
  Descent out;
  const std::size_t m = path.segments, dim = path.dim;
  const std::size_t stride = real_only ? 2 : 1;
  std::vector<std::size_t> vars;
  for (std::size_t j = 1; j < m; ++j)
    for (std::size_t c = 0; c < dim * 2; c += stride) vars.push_back(j * dim * 2 + c);

  const double h = kFdStep * scale;
  const double guard = kNodeGuard * scale;
  double length = path.length();
  double step = opts.step * scale;
  std::vector<double> grad(vars.size());
  FlatPath trial = path;
  std::vector<double> history{length};

  int it = 0;
  for (; it < opts.max_iters && !vars.empty(); ++it) {
    double gnorm2 = 0.0;
    for (std::size_t v = 0; v < vars.size(); ++v) {
      const std::size_t idx = vars[v];
      const std::size_t node = idx / (dim * 2);
      const double saved = path.x[idx];
      path.x[idx] = saved + h;
      const double up = path.segment(node - 1) + path.segment(node);
      path.x[idx] = saved - h;
      const double down = path.segment(node - 1) + path.segment(node);
      path.x[idx] = saved;
      grad[v] = (up - down) / (2.0 * h);
      if (!std::isfinite(grad[v])) grad[v] = 0.0;
      gnorm2 += grad[v] * grad[v];
    }
    if (gnorm2 == 0.0) {
      out.converged = true;
      break;
    }

    bool accepted = false;
    double next = length;
    for (double t = step; t >= kMinStep * scale; t *= 0.5) {
      trial.x = path.x;
      for (std::size_t v = 0; v < vars.size(); ++v) trial.x[vars[v]] -= t * grad[v];
      bool degenerate = false;
      for (std::size_t j = 1; j < m && !degenerate; ++j) degenerate = trial.node_norm(j) < guard;
      if (degenerate) continue;
      next = trial.length();
      if (std::isfinite(next) && next <= length - kArmijo * t * gnorm2) {
        accepted = true;
        step = 2.0 * t;
        break;
      }
    }
    if (!accepted) {
      // no descent along the numerical gradient: stationary to line-search precision
      out.converged = true;
      break;
    }
    std::swap(path.x, trial.x);
    length = next;
    history.push_back(length);
    if (opts.keep_trace) out.trace.push_back(length);
    // energy tolerance over a window of accepted steps; a single short
    // backtracked step says little about convergence
    if (history.size() > kStopWindow && history[history.size() - 1 - kStopWindow] - length < opts.tol) {
      out.converged = true;
      ++it;
      break;
    }
  }
  out.iterations = it;
  out.length = length;
  out.path = std::move(path);
  return out;
}

// Adds alpha_j * start + beta_j * end to interior node j, with seeded
// Gaussian coefficients mirrored so that (alpha_j, beta_j) = (beta_{M-j},
// alpha_{M-j}). Reversing the path and moving it by a unitary scaling then
// maps the perturbed starts of (p, r) onto those of (r, p).
// When the chord runs through the origin those offsets stay on its line, so
// `off_line` adds a mirrored Gaussian offset to every coordinate as well.
void perturb(FlatPath& path, std::uint64_t seed, int start, double sigma, bool real_only, bool off_line) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(start)};
  std::mt19937_64 gen(seq);
  std::normal_distribution<double> noise(0.0, sigma);
  auto draw = [&] { return real_only ? Complex{noise(gen), 0.0} : Complex{noise(gen), noise(gen)}; };
  const std::size_t m = path.segments, dim = path.dim;
  std::vector<Complex> alpha(m + 1), beta(m + 1);
  for (std::size_t j = 1; 2 * j <= m; ++j) {
    alpha[j] = draw();
    beta[j] = 2 * j == m ? alpha[j] : draw();
    alpha[m - j] = beta[j];
    beta[m - j] = alpha[j];
  }
  std::vector<Complex> free(off_line ? (m + 1) * dim : 0);
  if (off_line) {
    const double scale = std::max(path.node_norm(0), path.node_norm(m));
    for (std::size_t j = 1; 2 * j <= m; ++j)
      for (std::size_t k = 0; k < dim; ++k) free[j * dim + k] = free[(m - j) * dim + k] = draw() * scale;
  }
  for (std::size_t j = 1; j < m; ++j) {
    for (std::size_t k = 0; k < dim; ++k) {
      const Complex start_k{path.re(0, k), path.im(0, k)}, end_k{path.re(m, k), path.im(m, k)};
      Complex delta = alpha[j] * start_k + beta[j] * end_k;
      if (off_line) delta += free[j * dim + k];
      path.x[(j * dim + k) * 2] += delta.real();
      path.x[(j * dim + k) * 2 + 1] += delta.imag();
    }
  }
}

std::vector<CVec> chord_nodes(const CVec& a, const CVec& b, int segments) {
  std::vector<CVec> nodes(static_cast<std::size_t>(segments) + 1, CVec(a.size()));
  for (int s = 0; s <= segments; ++s) {
    const double t = static_cast<double>(s) / segments;
    for (std::size_t k = 0; k < a.size(); ++k) nodes[s][k] = a[k] + (b[k] - a[k]) * t;
  }
  return nodes;
}

FlatPath flatten(const Weights& q, const std::vector<CVec>& nodes) {
  FlatPath f;
  f.q = &q;
  f.dim = q.size();
  f.segments = nodes.size() - 1;
  f.x.reserve(nodes.size() * f.dim * 2);
  for (const auto& n : nodes) {
    for (const auto& c : n) {
      f.x.push_back(c.real());
      f.x.push_back(c.imag());
    }
  }
  return f;
}

// Runs every start from `base`; a degenerate base (a chord through the
// origin) is skipped and only the perturbed starts compete.
GeodesicResult run_starts(const FlatPath& base, const GeodesicOptions& opts, bool real_only) {
  const std::size_t m = base.segments;
  const double scale = std::max(base.node_norm(0), base.node_norm(m));
  double spread = 0.0;
  for (std::size_t c = 0; c < base.dim * 2; ++c) {
    const double d = base.x[m * base.dim * 2 + c] - base.x[c];
    spread += d * d;
  }
  spread = std::sqrt(spread);

  bool through_origin = !std::isfinite(base.length());
  for (std::size_t j = 1; j < m && !through_origin; ++j) through_origin = base.node_norm(j) < kNodeGuard * scale;

  GeodesicResult result;
  // a chord with a vanishing node is not a valid path
  result.chord_length = through_origin ? std::numeric_limits<double>::infinity() : base.length();
  bool have = false;
  for (int s = 0; s < opts.multistarts; ++s) {
    FlatPath init = base;
    if (s > 0) {
      if (spread == 0.0) break;
      perturb(init, opts.seed, s, kPerturbation * spread, real_only, through_origin);
    }
    if (!std::isfinite(init.length())) continue;
    bool degenerate = false;
    for (std::size_t j = 1; j < m && !degenerate; ++j) degenerate = init.node_norm(j) < kNodeGuard * scale;
    if (degenerate) continue;

    Descent d = descend(std::move(init), opts, real_only, scale);
    if (!have || d.length < result.distance) {
      have = true;
      result.distance = d.length;
      result.path = unflatten(d.path);
      result.converged = d.converged;
      result.iterations = d.iterations;
      result.best_start = s;
      result.trace = std::move(d.trace);
    }
  }
  if (!have) throw DegeneratePath("every optimizer start hit a degenerate path");
  return result;
}

}  // namespace

double path_length(const PiecewisePath& path) {
  const FlatPath f = flatten(path);
  const double len = f.length();
  if (!std::isfinite(len)) throw DegeneratePath("path midpoint vanishes");
  return len;
}

void GeodesicOptions::validate() const {
  if (segments < 2) throw InvalidArgument("geodesic: segments must be >= 2");
  if (max_iters < 1) throw InvalidArgument("geodesic: max_iters must be >= 1");
  if (!(tol > 0.0)) throw InvalidArgument("geodesic: tol must be positive");
  if (!(step > 0.0)) throw InvalidArgument("geodesic: step must be positive");
  if (multistarts < 1) throw InvalidArgument("geodesic: multistarts must be >= 1");
}

Complex phase_alignment(const Weights& q, std::span<const Complex> z, std::span<const Complex> w) {
  std::vector<Complex> coef(z.size());
  int qmax = 1;
  for (std::size_t k = 0; k < z.size(); ++k) {
    coef[k] = static_cast<double>(q[k]) * z[k] * std::conj(w[k]);
    qmax = std::max(qmax, q[k]);
  }
  // Re <z, e^{i psi} . w>_q = Re sum_k coef_k e^{-i psi q_k}
  auto score = [&](double psi) {
    double s = 0.0;
    for (std::size_t k = 0; k < coef.size(); ++k) s += (coef[k] * std::polar(1.0, -psi * q[k])).real();
    return s;
  };
  const int samples = 64 * qmax + 64;
  const double dpsi = 2.0 * std::numbers::pi / samples;
  double best_psi = 0.0, best = score(0.0);
  for (int i = 1; i < samples; ++i) {
    const double v = score(i * dpsi);
    if (v > best) {
      best = v;
      best_psi = i * dpsi;
    }
  }
  // golden-section refinement inside the neighbouring samples
  constexpr double inv_phi = 0.6180339887498949;
  double lo = best_psi - dpsi, hi = best_psi + dpsi;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = score(x1), f2 = score(x2);
  for (int i = 0; i < 80; ++i) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = score(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = score(x2);
    }
  }
  const double psi = 0.5 * (lo + hi);
  if (score(psi) > best) best_psi = psi;
  return std::polar(1.0, best_psi);
}

PiecewisePath initial_chord(const ProjPoint& p1, const ProjPoint& p2, int segments) {
  require_same_weights(p1.weights(), p2.weights());
  const Weights& q = p1.weights();
  const ProjPoint a = normalize_geometric(p1);
  const ProjPoint b = normalize_geometric(p2);
  const Complex lambda = phase_alignment(q, a.coords(), b.coords());
  try {
    return PiecewisePath(q, chord_nodes(a.coords(), act(q, b.coords(), lambda), segments));
  } catch (const InvalidPoint&) {
    throw DegeneratePath("straight chord passes through the origin");
  }
}

double chord_distance(const ProjPoint& p1, const ProjPoint& p2) {
  require_same_weights(p1.weights(), p2.weights());
  const Weights& q = p1.weights();
  const ProjPoint a = normalize_geometric(p1);
  const ProjPoint b = normalize_geometric(p2);
  const CVec aligned = act(q, b.coords(), phase_alignment(q, a.coords(), b.coords()));
  double s = 0.0;
  for (std::size_t k = 0; k < aligned.size(); ++k) s += std::norm(a[k] - aligned[k]);
  return std::sqrt(s);
}

GeodesicResult minimize_path(const PiecewisePath& start, const GeodesicOptions& opts, bool real_only) {
  opts.validate();
  return run_starts(flatten(start), opts, real_only);
}

GeodesicResult geodesic_distance(const ProjPoint& p1, const ProjPoint& p2, const GeodesicOptions& opts) {
  require_same_weights(p1.weights(), p2.weights());
  opts.validate();
  const Weights& q = p1.weights();
  const ProjPoint a = normalize_geometric(p1);
  const ProjPoint b = normalize_geometric(p2);
  const CVec aligned = act(q, b.coords(), phase_alignment(q, a.coords(), b.coords()));
  return run_starts(flatten(q, chord_nodes(a.coords(), aligned, opts.segments)), opts, false);
}

GeodesicResult geodesic_distance_rational(const RatProjPoint& p1, const RatProjPoint& p2,
                                          const GeodesicOptions& opts) {
  require_same_weights(p1.weights(), p2.weights());
  if (!p1.normalized() || !p2.normalized())
    throw PreconditionError("rational Finsler distance expects wgcd-normalized representatives");
  opts.validate();
  const Weights& q = p1.weights();
  const CVec a = p1.to_complex().coords();
  CVec b = p2.to_complex().coords();
  // real unit scalars are +-1
  const CVec flipped = act(q, b, Complex{-1.0, 0.0});
  if (weighted_inner(q, a, flipped).real() > weighted_inner(q, a, b).real()) b = flipped;
  return run_starts(flatten(q, chord_nodes(a, b, opts.segments)), opts, true);
}

}  // namespace wps
