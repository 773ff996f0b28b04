#pragma once

// Shared fixtures and brute-force oracles for the tests.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <tuple>
#include <vector>

#include "wps/cluster.hpp"
#include "wps/core.hpp"

namespace wps::test {

inline CVec random_cvec(std::mt19937_64& gen, std::size_t dim, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  CVec v(dim);
  for (auto& c : v) {
    const double re = n(gen);
    c = {re, n(gen)};
  }
  return v;
}

inline ProjPoint random_point(std::mt19937_64& gen, const Weights& q) { return ProjPoint(q, random_cvec(gen, q.size())); }

inline Complex random_scalar(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> r(0.3, 3.0), a(-3.14159, 3.14159);
  return std::polar(r(gen), a(gen));
}

/// Symmetric matrix with entries k / 2^20, k uniform in [1, 2^20]; sums of
/// up to 2^12 such entries stay exact in double precision.
inline DistanceMatrix dyadic_matrix(std::mt19937_64& gen, std::size_t n, int levels = 1 << 20) {
  std::uniform_int_distribution<int> k(1, levels);
  DistanceMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m.set(i, j, k(gen) / static_cast<double>(levels));
  return m;
}

/// Naive agglomeration: every step recomputes all inter-cluster linkage
/// values from the original matrix, then picks the minimum of
/// (value, min_id, max_id).
inline Dendrogram naive_agglomerate(const DistanceMatrix& m, Linkage linkage) {
  const std::size_t n = m.size();
  std::vector<std::vector<std::size_t>> members;
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < n; ++i) {
    members.push_back({i});
    ids.push_back(i);
  }
  Dendrogram d;
  d.n_leaves = n;
  for (std::size_t step = 0; step + 1 < n; ++step) {
    using Key = std::tuple<double, std::size_t, std::size_t>;
    Key best{std::numeric_limits<double>::infinity(), 0, 0};
    std::size_t ba = 0, bb = 0;
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        double v = linkage == Linkage::single ? std::numeric_limits<double>::infinity() : 0.0;
        for (std::size_t x : members[a]) {
          for (std::size_t y : members[b]) {
            if (linkage == Linkage::single) v = std::min(v, m(x, y));
            else if (linkage == Linkage::complete) v = std::max(v, m(x, y));
            else v += m(x, y);
          }
        }
        if (linkage == Linkage::average)
          v /= static_cast<double>(members[a].size()) * static_cast<double>(members[b].size());
        const Key k{v, std::min(ids[a], ids[b]), std::max(ids[a], ids[b])};
        if (k < best) {
          best = k;
          ba = a;
          bb = b;
        }
      }
    }
    d.merges.push_back({std::get<1>(best), std::get<2>(best), std::get<0>(best), n + step});
    members[ba].insert(members[ba].end(), members[bb].begin(), members[bb].end());
    ids[ba] = n + step;
    members.erase(members.begin() + static_cast<std::ptrdiff_t>(bb));
    ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(bb));
  }
  return d;
}

/// Brute force: largest d <= max|x_i| with d^{q_i} | x_i for all i.
/// Keep |x_i| well below 2^63 / max|x_i|.
inline long long brute_wgcd(const std::vector<long long>& x, const Weights& q) {
  long long bound = 0;
  for (long long v : x) bound = std::max(bound, std::llabs(v));
  long long best = 1;
  for (long long d = 2; d <= bound; ++d) {
    bool ok = true;
    for (std::size_t i = 0; i < x.size() && ok; ++i) {
      if (x[i] == 0) continue;
      long long p = 1;
      for (int e = 0; e < q[i] && ok; ++e) {
        p *= d;
        ok = p <= std::llabs(x[i]);
      }
      ok = ok && x[i] % p == 0;
    }
    if (ok) best = d;
  }
  return best;
}

}  // namespace wps::test
