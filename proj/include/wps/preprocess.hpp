#pragma once

// Dataset normalization and weighted PCA on lifted representatives.

#include <cstddef>
#include <vector>

#include "wps/core.hpp"

namespace wps {

enum class NormalizeMode { geometric, rational };

/// Every point normalize_geometric'd, order preserved. `mode` must be
/// geometric; otherwise throws PreconditionError (kind mismatch).
std::vector<ProjPoint> normalize_dataset(const std::vector<ProjPoint>& points, NormalizeMode mode);
/// Every point normalize_rational'd; `mode` must be rational.
std::vector<RatProjPoint> normalize_dataset(const std::vector<RatProjPoint>& points, NormalizeMode mode);

struct WeightedPCAResult {
  /// all n+1 eigenvalues of the weighted covariance, non-increasing
  std::vector<double> eigenvalues;
  /// top-k components, orthonormal under <a, b>_q
  std::vector<CVec> components;
  /// projected[i][j] = <z_i - mean, components[j]>_q
  std::vector<CVec> projected;
  CVec mean;
  /// mean over points of || residual ||_q^2 after keeping k components
  double reconstruction_error = 0.0;
};

/// Normalizes geometrically, centers at the mean representative (unless
/// `center` is false), forms C = (1/N) sum_i y_i y_i^H with
/// y = Q^{1/2} (z - mean) and keeps the top k eigenvectors.
/// Throws InvalidArgument for k outside [1, n+1] or fewer than two points.
WeightedPCAResult weighted_pca(const std::vector<ProjPoint>& points, std::size_t k, bool center = true);

/// mean + sum_j projected[j] * components[j] for one row of `projected`.
CVec pca_reconstruct(const WeightedPCAResult& pca, std::size_t index);

}  // namespace wps
