#include <doctest.h>

#include <random>

#include "support.hpp"
#include "wps/error.hpp"
#include "wps/preprocess.hpp"

using namespace wps;

namespace {

std::vector<ProjPoint> random_cloud(std::mt19937_64& gen, const Weights& q, std::size_t n) {
  std::vector<ProjPoint> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back(test::random_point(gen, q));
  return pts;
}

// (1/N) sum_i ||z_i - mean||_q^2 on normalized points, computed directly.
double centered_trace(const std::vector<ProjPoint>& raw) {
  const auto pts = normalize_dataset(raw, NormalizeMode::geometric);
  const std::size_t dim = pts.front().size();
  CVec mean(dim);
  for (const auto& p : pts)
    for (std::size_t k = 0; k < dim; ++k) mean[k] += p[k] / static_cast<double>(pts.size());
  double s = 0.0;
  for (const auto& p : pts)
    for (std::size_t k = 0; k < dim; ++k) s += p.weights()[k] * std::norm(p[k] - mean[k]);
  return s / static_cast<double>(pts.size());
}

}  // namespace

TEST_CASE("dataset normalization") {
  std::mt19937_64 gen(41);
  const Weights q{2, 4, 6, 10};
  const auto pts = random_cloud(gen, q, 20);
  const auto once = normalize_dataset(pts, NormalizeMode::geometric);
  const auto twice = normalize_dataset(once, NormalizeMode::geometric);
  REQUIRE(once.size() == pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(weighted_norm(once[i]) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t k = 0; k < q.size(); ++k) CHECK(std::abs(twice[i][k] - once[i][k]) <= 1e-12);
  }

  const std::vector<RatProjPoint> rat{make_rational({2, 3}, {4, 8}), make_rational({2, 3}, {1, 1})};
  const auto nr = normalize_dataset(rat, NormalizeMode::rational);
  CHECK(nr[0].coords() == make_rational({2, 3}, {1, 1}).coords());
  CHECK(nr[1].coords() == make_rational({2, 3}, {1, 1}).coords());

  CHECK_THROWS_AS(normalize_dataset(rat, NormalizeMode::geometric), PreconditionError);
  CHECK_THROWS_AS(normalize_dataset(pts, NormalizeMode::rational), PreconditionError);
  CHECK_THROWS_AS(normalize_dataset(std::vector<ProjPoint>{}, NormalizeMode::geometric), InvalidArgument);
}

TEST_CASE("weighted PCA spectrum, orthonormality and reconstruction") {
  std::mt19937_64 gen(42);
  for (const Weights& q : {Weights{2, 4, 6, 10}, Weights{1, 2, 3}}) {
    const auto pts = random_cloud(gen, q, 40);
    const std::size_t dim = q.size();
    double prev_err = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= dim; ++k) {
      const WeightedPCAResult r = weighted_pca(pts, k);
      REQUIRE(r.eigenvalues.size() == dim);
      REQUIRE(r.components.size() == k);
      REQUIRE(r.projected.size() == pts.size());

      double sum = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        CHECK(r.eigenvalues[j] >= 0.0);
        if (j > 0) CHECK(r.eigenvalues[j] <= r.eigenvalues[j - 1]);
        sum += r.eigenvalues[j];
      }
      const double trace = centered_trace(pts);
      CHECK(std::abs(sum - trace) <= 1e-8 * trace);

      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
          const Complex ip = weighted_inner(q, r.components[a], r.components[b]);
          CHECK(std::abs(ip - Complex(a == b ? 1.0 : 0.0)) <= 1e-10);
        }

      // reconstruction error from explicit residuals
      const auto normalized = normalize_dataset(pts, NormalizeMode::geometric);
      double err = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const CVec rec = pca_reconstruct(r, i);
        for (std::size_t c = 0; c < dim; ++c) err += q[c] * std::norm(normalized[i][c] - rec[c]);
      }
      err /= static_cast<double>(pts.size());
      double discarded = 0.0;
      for (std::size_t j = k; j < dim; ++j) discarded += r.eigenvalues[j];
      CHECK(std::abs(err - r.reconstruction_error) <= 1e-8 * (trace + err));
      CHECK(std::abs(discarded - r.reconstruction_error) <= 1e-8 * trace);
      CHECK(r.reconstruction_error <= prev_err + 1e-15);
      prev_err = r.reconstruction_error;
    }

    // full rank keeps the weighted inner products of centered points
    const WeightedPCAResult full = weighted_pca(pts, dim);
    const auto normalized = normalize_dataset(pts, NormalizeMode::geometric);
    for (std::size_t i = 0; i < pts.size(); i += 7)
      for (std::size_t l = 0; l < pts.size(); l += 5) {
        CVec yi(dim), yl(dim);
        for (std::size_t c = 0; c < dim; ++c) {
          yi[c] = normalized[i][c] - full.mean[c];
          yl[c] = normalized[l][c] - full.mean[c];
        }
        Complex coeff{};
        for (std::size_t j = 0; j < dim; ++j) coeff += full.projected[i][j] * std::conj(full.projected[l][j]);
        CHECK(std::abs(coeff - weighted_inner(q, yi, yl)) <= 1e-8);
      }
  }
}

TEST_CASE("weighted PCA fixtures") {
  const Weights q{2, 4, 6, 10};
  std::vector<ProjPoint> same(5, ProjPoint(q, {0.3, 0.1, Complex{0.0, 0.2}, 0.05}));
  const WeightedPCAResult z = weighted_pca(same, 2);
  for (double e : z.eigenvalues) CHECK(std::abs(e) <= 1e-12);
  for (const auto& row : z.projected)
    for (const auto& c : row) CHECK(std::abs(c) <= 1e-12);

  // unit points c + r e^{i phi} d with <c, d>_q = 0 lie on one complex line
  const CVec c{0.5, 0.0, 0.0, 0.0};
  const CVec d{0.0, 0.2, Complex{0.0, 0.1}, 0.1};
  const double cc = weighted_inner(q, c, c).real(), dd = weighted_inner(q, d, d).real();
  const double r = std::sqrt((1.0 - cc) / dd);
  std::vector<ProjPoint> line;
  for (int i = 0; i < 12; ++i) {
    const Complex t = std::polar(r, 0.5 * i * i);
    CVec z(4);
    for (std::size_t k = 0; k < 4; ++k) z[k] = c[k] + t * d[k];
    line.emplace_back(q, z);
  }
  const WeightedPCAResult lr = weighted_pca(line, 1);
  CHECK(lr.eigenvalues[0] > 1e-3);
  for (std::size_t j = 1; j < 4; ++j) CHECK(std::abs(lr.eigenvalues[j]) <= 1e-8);

  std::mt19937_64 gen(43);
  const auto pts = random_cloud(gen, q, 10);
  CHECK_THROWS_AS(weighted_pca(pts, 0), InvalidArgument);
  CHECK_THROWS_AS(weighted_pca(pts, 5), InvalidArgument);
  CHECK_THROWS_AS(weighted_pca({pts.front()}, 1), InvalidArgument);
}

TEST_CASE("weighted PCA spectrum is invariant under a common unit phase") {
  std::mt19937_64 gen(44);
  const Weights q{2, 1, 3};
  const auto pts = random_cloud(gen, q, 25);
  std::vector<ProjPoint> turned;
  for (const auto& p : pts) turned.push_back(act(p, std::polar(1.0, 0.7)));
  const auto a = weighted_pca(pts, 2), b = weighted_pca(turned, 2);
  for (std::size_t j = 0; j < a.eigenvalues.size(); ++j)
    CHECK(std::abs(a.eigenvalues[j] - b.eigenvalues[j]) <= 1e-8);
  CHECK(std::abs(a.reconstruction_error - b.reconstruction_error) <= 1e-8);

  const auto uncentered = weighted_pca(pts, 3, false);
  double sum = 0.0;
  for (double e : uncentered.eigenvalues) sum += e;
  // without centering the trace is the mean squared norm, which is 1
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
}
