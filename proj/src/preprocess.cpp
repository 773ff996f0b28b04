#include "wps/preprocess.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "wps/error.hpp"

namespace wps {

std::vector<ProjPoint> normalize_dataset(const std::vector<ProjPoint>& points, NormalizeMode mode) {
  if (mode != NormalizeMode::geometric) throw PreconditionError("rational normalization needs integer points");
  if (points.empty()) throw InvalidArgument("normalize: empty dataset");
  std::vector<ProjPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(normalize_geometric(p));
  return out;
}

std::vector<RatProjPoint> normalize_dataset(const std::vector<RatProjPoint>& points, NormalizeMode mode) {
  if (mode != NormalizeMode::rational) throw PreconditionError("geometric normalization needs complex points");
  if (points.empty()) throw InvalidArgument("normalize: empty dataset");
  std::vector<RatProjPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(normalize_rational(p));
  return out;
}

WeightedPCAResult weighted_pca(const std::vector<ProjPoint>& points, std::size_t k, bool center) {
  if (points.size() < 2) throw InvalidArgument("pca: needs at least two points");
  const Weights& q = points.front().weights();
  for (const auto& p : points) require_same_weights(q, p.weights());
  const std::size_t dim = q.size();
  if (k < 1 || k > dim) throw InvalidArgument("pca: k must lie in [1, " + std::to_string(dim) + "]");

  const std::size_t n = points.size();
  Eigen::MatrixXcd z(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const ProjPoint u = normalize_geometric(points[i]);
    for (std::size_t c = 0; c < dim; ++c) z(c, i) = u[c];
  }

  Eigen::VectorXcd mean = Eigen::VectorXcd::Zero(z.rows());
  if (center) mean = z.rowwise().mean();
  Eigen::VectorXd sqrt_q(z.rows());
  for (std::size_t c = 0; c < dim; ++c) sqrt_q(c) = std::sqrt(static_cast<double>(q[c]));

  const Eigen::MatrixXcd y = sqrt_q.asDiagonal() * (z.colwise() - mean);
  const Eigen::MatrixXcd cov = (y * y.adjoint()) / static_cast<double>(n);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(cov);
  if (solver.info() != Eigen::Success) throw Error("pca: eigendecomposition failed");

  WeightedPCAResult r;
  const Eigen::Index d = z.rows();
  // Eigen sorts ascending
  for (Eigen::Index j = d - 1; j >= 0; --j) {
    double v = solver.eigenvalues()(j);
    if (v < 0.0 && v >= -1e-10) v = 0.0;
    r.eigenvalues.push_back(v);
  }
  const Eigen::MatrixXcd u = solver.eigenvectors().rowwise().reverse().leftCols(static_cast<Eigen::Index>(k));
  const Eigen::MatrixXcd coeff = u.adjoint() * y;  // k x n
  const Eigen::MatrixXcd residual = y - u * coeff;

  for (std::size_t j = 0; j < k; ++j) {
    CVec c(dim);
    for (std::size_t t = 0; t < dim; ++t) c[t] = u(t, j) / sqrt_q(t);
    r.components.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < n; ++i) {
    CVec row(k);
    for (std::size_t j = 0; j < k; ++j) row[j] = coeff(j, i);
    r.projected.push_back(std::move(row));
  }
  r.mean.assign(mean.data(), mean.data() + d);
  // residual columns are already in Q^{1/2} coordinates, so the plain norm is the weighted norm
  r.reconstruction_error = residual.colwise().squaredNorm().sum() / static_cast<double>(n);
  return r;
}

CVec pca_reconstruct(const WeightedPCAResult& pca, std::size_t index) {
  CVec out = pca.mean;
  const CVec& coeff = pca.projected.at(index);
  for (std::size_t j = 0; j < coeff.size(); ++j)
    for (std::size_t t = 0; t < out.size(); ++t) out[t] += coeff[j] * pca.components[j][t];
  return out;
}

}  // namespace wps
