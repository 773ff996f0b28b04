#pragma once

// Integer helpers shared by the rational-point routines. Internal header.

#include <map>
#include <vector>

#include "wps/core.hpp"

namespace wps::detail {

/// Prime factorization of |n| (n != 0) as prime -> exponent.
/// Miller-Rabin plus Brent's variant of Pollard rho; deterministic.
std::map<BigInt, int> factorize(BigInt n);

/// Exponent of p in |n|, n != 0.
int valuation(BigInt n, const BigInt& p);

/// Integer power with non-negative exponent.
BigInt ipow(const BigInt& base, unsigned exp);

/// Integer gcd (x, y) with Bezout coefficients: a*x + b*y = g, g >= 0.
long long ext_gcd(long long x, long long y, long long& a, long long& b);

}  // namespace wps::detail
