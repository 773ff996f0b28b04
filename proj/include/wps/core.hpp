#pragma once

// Points of weighted projective spaces P_q over C and over Q.
//
// A class [z] is the orbit of a nonzero vector z under
//   (z_0, ..., z_n) ~ (l^{q_0} z_0, ..., l^{q_n} z_n),  l != 0.
// Complex points carry double-precision coordinates; rational points carry
// exact integer coordinates so that wgcd and heights are computed exactly.

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace wps {

using Complex = std::complex<double>;
using BigInt = boost::multiprecision::cpp_int;
using CVec = std::vector<Complex>;

/// Positive integer grades (q_0, ..., q_n), n >= 1.
class Weights {
 public:
  Weights() = default;
  explicit Weights(std::vector<int> q);
  Weights(std::initializer_list<int> q) : Weights(std::vector<int>(q)) {}

  std::size_t size() const { return q_.size(); }
  int operator[](std::size_t k) const { return q_[k]; }
  const std::vector<int>& values() const { return q_; }
  auto begin() const { return q_.begin(); }
  auto end() const { return q_.end(); }

  /// lcm(q_0, ..., q_n)
  std::int64_t lcm() const;

  friend bool operator==(const Weights&, const Weights&) = default;

 private:
  std::vector<int> q_;
};

/// Representative of a class in P_q(C).
class ProjPoint {
 public:
  ProjPoint() = default;
  /// Throws InvalidPoint if the coordinates are all zero or the length
  /// does not match the weights.
  ProjPoint(Weights w, CVec coords);

  const Weights& weights() const { return weights_; }
  const CVec& coords() const { return coords_; }
  std::size_t size() const { return coords_.size(); }
  const Complex& operator[](std::size_t k) const { return coords_[k]; }

 private:
  Weights weights_;
  CVec coords_;
};

/// Integer representative of a class in P_q(Q).
class RatProjPoint {
 public:
  RatProjPoint() = default;
  /// Validates non-vanishing. `normalized` is recomputed, not trusted.
  RatProjPoint(Weights w, std::vector<BigInt> coords);

  const Weights& weights() const { return weights_; }
  const std::vector<BigInt>& coords() const { return coords_; }
  std::size_t size() const { return coords_.size(); }
  const BigInt& operator[](std::size_t k) const { return coords_[k]; }
  /// True iff wgcd(coords) == 1.
  bool normalized() const { return normalized_; }

  /// Real embedding used by the geometric routines.
  ProjPoint to_complex() const;

  friend bool operator==(const RatProjPoint& a, const RatProjPoint& b) {
    return a.weights_ == b.weights_ && a.coords_ == b.coords_;
  }

 private:
  Weights weights_;
  std::vector<BigInt> coords_;
  bool normalized_ = false;
};

RatProjPoint make_rational(Weights w, std::initializer_list<long long> coords);

/// Tangent vector attached to a base point.
struct Tangent {
  ProjPoint base;
  CVec v;

  Tangent(ProjPoint b, CVec vec);
};

/// (sum_k q_k |z_k|^2)^{1/2}
double weighted_norm(const ProjPoint& p);
double weighted_norm(const Weights& q, std::span<const Complex> z);

/// sum_k q_k a_k conj(b_k)
Complex weighted_inner(const Weights& q, std::span<const Complex> a, std::span<const Complex> b);

/// Representative of the same class with weighted_norm 1: the action by the
/// unique real l > 0 with sum_k q_k l^{2 q_k} |z_k|^2 = 1. For equal weights
/// this is division by weighted_norm(p).
ProjPoint normalize_geometric(const ProjPoint& p);

/// Coordinate k becomes lambda^{q_k} z_k. Throws InvalidScalar for lambda == 0.
ProjPoint act(const ProjPoint& p, Complex lambda);
CVec act(const Weights& q, std::span<const Complex> z, Complex lambda);

/// Largest d >= 1 with d^{q_i} | x_i for every i. Throws InvalidPoint on
/// the zero vector.
BigInt wgcd(std::span<const BigInt> x, const Weights& q);

/// x_i / wgcd^{q_i}, then the sign convention: if the lowest-index nonzero
/// coordinate of odd weight is negative, act by -1.
RatProjPoint normalize_rational(const RatProjPoint& p);

/// max_i |x_i|^{1/q_i} on the canonical representative.
double weighted_height(const RatProjPoint& p);

/// Complex class equality: the zero patterns agree and there is a scalar l
/// with w_k = l^{q_k} z_k on the support, up to relative tolerance `tol`.
bool equivalent(const ProjPoint& p1, const ProjPoint& p2, double tol = 1e-9);

/// Exact class equality over Q (canonical representatives coincide).
bool equivalent_rational(const RatProjPoint& p1, const RatProjPoint& p2);

/// Throws WeightMismatch unless the two weight vectors are identical.
void require_same_weights(const Weights& a, const Weights& b);

}  // namespace wps
