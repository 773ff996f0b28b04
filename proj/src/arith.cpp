#include "arith.hpp"

#include <random>

#include <boost/multiprecision/miller_rabin.hpp>

namespace wps::detail {

namespace {

constexpr unsigned kSmallPrimeBound = 1000;

BigInt abs_big(const BigInt& n) { return n < 0 ? BigInt(-n) : n; }

bool is_prime(const BigInt& n, std::mt19937_64& gen) {
  if (n < 2) return false;
  return boost::multiprecision::miller_rabin_test(n, 25, gen);
}

// Brent's cycle detection; returns a nontrivial factor of composite n.
BigInt pollard_brent(const BigInt& n, std::mt19937_64& gen) {
  if (n % 2 == 0) return 2;
  std::uniform_int_distribution<unsigned long long> dist(1, ~0ULL);
  for (;;) {
    BigInt y = BigInt(dist(gen)) % n;
    BigInt c = BigInt(dist(gen)) % n;
    if (c == 0) c = 1;
    const unsigned m = 64;
    BigInt g = 1, r = 1, q = 1, x, ys;
    while (g == 1) {
      x = y;
      for (BigInt i = 0; i < r; ++i) y = (y * y + c) % n;
      BigInt k = 0;
      while (k < r && g == 1) {
        ys = y;
        for (BigInt i = 0; i < m && i < r - k; ++i) {
          y = (y * y + c) % n;
          q = (q * abs_big(x - y)) % n;
        }
        g = boost::multiprecision::gcd(q, n);
        k += m;
      }
      r *= 2;
    }
    if (g == n) {
      do {
        ys = (ys * ys + c) % n;
        g = boost::multiprecision::gcd(abs_big(x - ys), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split(const BigInt& n, std::map<BigInt, int>& out, std::mt19937_64& gen) {
  if (n == 1) return;
  if (is_prime(n, gen)) {
    ++out[n];
    return;
  }
  const BigInt f = pollard_brent(n, gen);
  split(f, out, gen);
  split(n / f, out, gen);
}

}  // namespace

std::map<BigInt, int> factorize(BigInt n) {
  n = abs_big(n);
  std::map<BigInt, int> out;
  for (unsigned p = 2; p < kSmallPrimeBound && n > 1; ++p) {
    // p runs over all integers; composites never divide after their
    // prime factors are stripped.
    while (n % p == 0) {
      ++out[BigInt(p)];
      n /= p;
    }
  }
  if (n > 1) {
    std::mt19937_64 gen(0x5eedULL);
    split(n, out, gen);
  }
  return out;
}

int valuation(BigInt n, const BigInt& p) {
  n = abs_big(n);
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

BigInt ipow(const BigInt& base, unsigned exp) { return boost::multiprecision::pow(base, exp); }

long long ext_gcd(long long x, long long y, long long& a, long long& b) {
  long long old_r = x, r = y, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const long long quot = old_r / r;
    long long tmp = old_r - quot * r;
    old_r = r;
    r = tmp;
    tmp = old_s - quot * s;
    old_s = s;
    s = tmp;
    tmp = old_t - quot * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  a = old_s;
  b = old_t;
  return old_r;
}

}  // namespace wps::detail
