#include "wps/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <tuple>

#include "format.hpp"
#include "parallel.hpp"
#include "wps/error.hpp"

namespace wps {

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> entries) : n_(n), data_(std::move(entries)) {
  if (data_.size() != n * n) throw InvalidArgument("distance matrix: expected " + std::to_string(n * n) + " entries");
  validate();
}

void DistanceMatrix::set(std::size_t i, std::size_t j, double v) {
  data_[i * n_ + j] = v;
  data_[j * n_ + i] = v;
}

void DistanceMatrix::validate() const {
  for (std::size_t i = 0; i < n_; ++i) {
    if ((*this)(i, i) != 0.0) throw InvalidArgument("distance matrix: nonzero diagonal at " + std::to_string(i));
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double v = (*this)(i, j);
      const std::string where = " at (" + std::to_string(i) + ", " + std::to_string(j) + ")";
      if (!std::isfinite(v) || v < 0.0) throw InvalidArgument("distance matrix: invalid entry" + where);
      if (v != (*this)(j, i)) throw InvalidArgument("distance matrix: not symmetric" + where);
    }
  }
}

std::string_view to_string(Linkage l) {
  switch (l) {
    case Linkage::single: return "single";
    case Linkage::complete: return "complete";
    case Linkage::average: return "average";
  }
  return "?";
}

Linkage parse_linkage(std::string_view s) {
  if (s == "single") return Linkage::single;
  if (s == "complete") return Linkage::complete;
  if (s == "average") return Linkage::average;
  throw InvalidArgument("unknown linkage '" + std::string(s) + "'");
}

void Dendrogram::validate() const {
  if (n_leaves == 0) throw InvalidArgument("dendrogram: no leaves");
  if (merges.size() != n_leaves - 1) throw InvalidArgument("dendrogram: expected n_leaves - 1 merges");
  std::vector<bool> used(2 * n_leaves - 1, false);
  for (std::size_t s = 0; s < merges.size(); ++s) {
    const Merge& m = merges[s];
    const std::size_t id = n_leaves + s;
    if (m.id != id) throw InvalidArgument("dendrogram: merge " + std::to_string(s) + " has id " + std::to_string(m.id));
    if (m.left >= id || m.right >= id || m.left == m.right)
      throw InvalidArgument("dendrogram: merge " + std::to_string(s) + " refers to an unavailable cluster");
    if (used[m.left] || used[m.right])
      throw InvalidArgument("dendrogram: cluster merged twice at merge " + std::to_string(s));
    if (!std::isfinite(m.height)) throw InvalidArgument("dendrogram: non-finite height");
    used[m.left] = used[m.right] = true;
  }
}

DistanceMatrix distance_matrix(std::size_t n, const PairDistance& oracle, unsigned parallelism) {
  if (n == 0) throw InvalidArgument("distance matrix needs at least one point");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  std::vector<double> values(pairs.size());
  detail::parallel_for(pairs.size(), parallelism, [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    double v;
    try {
      v = oracle(i, j);
    } catch (const std::exception& e) {
      throw PairError(i, j, e.what());
    }
    if (!std::isfinite(v) || v < 0.0) throw PairError(i, j, "oracle returned " + detail::format_double(v));
    values[p] = v;
  });

  DistanceMatrix m(n);
  for (std::size_t p = 0; p < pairs.size(); ++p) m.set(pairs[p].first, pairs[p].second, values[p]);
  return m;
}

namespace {

// Active clusters live in slots 0..n-1; a merge reuses the slot of its
// first operand. Average linkage keeps sums of pairwise distances so every
// value is one division of an exactly updated sum.
class Agglomerator {
 public:
  Agglomerator(const DistanceMatrix& m, Linkage linkage)
      : n_(m.size()), linkage_(linkage), d_(m.data()), id_(n_), size_(n_, 1), active_(n_, true), nn_(n_) {
    std::iota(id_.begin(), id_.end(), std::size_t{0});
    for (std::size_t s = 0; s < n_; ++s) refresh(s);
  }

  Dendrogram run() {
    Dendrogram out;
    out.n_leaves = n_;
    out.merges.reserve(n_ - 1);
    for (std::size_t step = 0; step + 1 < n_; ++step) {
      std::size_t a = n_;
      for (std::size_t s = 0; s < n_; ++s) {
        if (!active_[s]) continue;
        if (a == n_ || key(s, nn_[s]) < key(a, nn_[a])) a = s;
      }
      const std::size_t b = nn_[a];
      const double h = value(a, b);
      const std::size_t new_id = n_ + step;
      out.merges.push_back({std::min(id_[a], id_[b]), std::max(id_[a], id_[b]), h, new_id});
      merge(a, b, new_id);
    }
    return out;
  }

 private:
  using Key = std::tuple<double, std::size_t, std::size_t>;

  double& raw(std::size_t s, std::size_t t) { return d_[s * n_ + t]; }

  double value(std::size_t s, std::size_t t) const {
    const double v = d_[s * n_ + t];
    if (linkage_ != Linkage::average) return v;
    return v / (static_cast<double>(size_[s]) * static_cast<double>(size_[t]));
  }

  Key key(std::size_t s, std::size_t t) const {
    return {value(s, t), std::min(id_[s], id_[t]), std::max(id_[s], id_[t])};
  }

  void refresh(std::size_t s) {
    nn_[s] = n_;
    for (std::size_t t = 0; t < n_; ++t) {
      if (t == s || !active_[t]) continue;
      if (nn_[s] == n_ || key(s, t) < key(s, nn_[s])) nn_[s] = t;
    }
  }

  void merge(std::size_t a, std::size_t b, std::size_t new_id) {
    active_[b] = false;
    for (std::size_t k = 0; k < n_; ++k) {
      if (!active_[k] || k == a) continue;
      double v;
      switch (linkage_) {
        case Linkage::single: v = std::min(raw(a, k), raw(b, k)); break;
        case Linkage::complete: v = std::max(raw(a, k), raw(b, k)); break;
        default: v = raw(a, k) + raw(b, k); break;
      }
      raw(a, k) = raw(k, a) = v;
    }
    id_[a] = new_id;
    size_[a] += size_[b];

    for (std::size_t k = 0; k < n_; ++k) {
      if (!active_[k] || k == a) continue;
      if (nn_[k] == a || nn_[k] == b) {
        refresh(k);
      } else if (key(k, a) < key(k, nn_[k])) {
        nn_[k] = a;
      }
    }
    refresh(a);
  }

  std::size_t n_;
  Linkage linkage_;
  std::vector<double> d_;
  std::vector<std::size_t> id_, size_;
  std::vector<bool> active_;
  std::vector<std::size_t> nn_;
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

template <class Keep>
Partition cut_impl(const Dendrogram& d, Keep keep) {
  d.validate();
  const std::size_t n = d.n_leaves;
  std::vector<std::vector<std::size_t>> members(2 * n - 1);
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};
  UnionFind uf(n);
  for (const Merge& m : d.merges) {
    auto& dst = members[m.id];
    dst = members[m.left];
    dst.insert(dst.end(), members[m.right].begin(), members[m.right].end());
    if (keep(m)) {
      for (std::size_t leaf : dst) uf.unite(dst.front(), leaf);
    }
  }
  Partition p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = uf.find(i);
  return canonical_labels(p);
}

}  // namespace

Dendrogram agglomerate(const DistanceMatrix& m, Linkage linkage) {
  m.validate();
  if (m.size() == 0) throw InvalidArgument("agglomerate: empty matrix");
  return Agglomerator(m, linkage).run();
}

Partition canonical_labels(const Partition& p) {
  std::map<std::size_t, std::size_t> relabel;
  Partition out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto [it, inserted] = relabel.emplace(p[i], relabel.size());
    out[i] = it->second;
  }
  return out;
}

Partition cut_k(const Dendrogram& d, std::size_t k) {
  if (k < 1 || k > d.n_leaves)
    throw InvalidArgument("cut: k must lie in [1, " + std::to_string(d.n_leaves) + "], got " + std::to_string(k));
  const std::size_t kept = d.n_leaves - k;
  return cut_impl(d, [&](const Merge& m) { return m.id - d.n_leaves < kept; });
}

Partition cut_height(const Dendrogram& d, double threshold) {
  if (!(threshold >= 0.0)) throw InvalidArgument("cut: height threshold must be >= 0");
  return cut_impl(d, [&](const Merge& m) { return m.height <= threshold; });
}

std::string to_newick(const Dendrogram& d) {
  d.validate();
  const std::size_t n = d.n_leaves;
  std::vector<std::string> text(2 * n - 1);
  std::vector<double> height(2 * n - 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) text[i] = std::to_string(i);
  auto branch = [&](std::size_t child, double parent_height) {
    return text[child] + ":" + detail::format_double(parent_height - height[child]);
  };
  for (const Merge& m : d.merges) {
    text[m.id] = "(" + branch(m.left, m.height) + "," + branch(m.right, m.height) + ")";
    height[m.id] = m.height;
    text[m.left].clear();
    text[m.right].clear();
  }
  return text[2 * n - 2] + ";";
}

Partition kmeans_baseline(const std::vector<std::vector<double>>& coords, std::size_t k, std::uint64_t seed) {
  if (coords.empty()) throw InvalidArgument("kmeans: empty input");
  const std::size_t n = coords.size(), dim = coords.front().size();
  for (const auto& c : coords)
    if (c.size() != dim) throw InvalidArgument("kmeans: points have different dimensions");
  if (k < 1 || k > n) throw InvalidArgument("kmeans: k must lie in [1, n]");

  auto sq = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t t = 0; t < dim; ++t) s += (a[t] - b[t]) * (a[t] - b[t]);
    return s;
  };

  std::mt19937_64 gen(seed);
  std::vector<std::vector<double>> centers{coords[std::uniform_int_distribution<std::size_t>(0, n - 1)(gen)]};
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  while (centers.size() < k) {
    std::size_t far = 0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], sq(coords[i], centers.back()));
      if (nearest[i] > nearest[far]) far = i;
    }
    centers.push_back(coords[far]);
  }

  Partition assign(n, k);
  for (int round = 0; round < 100; ++round) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = sq(coords[i], centers[0]);
      for (std::size_t c = 1; c < k; ++c) {
        const double dc = sq(coords[i], centers[c]);
        if (dc < best_d) best = c, best_d = dc;
      }
      if (assign[i] != best) assign[i] = best, changed = true;
    }
    if (!changed) break;
    std::vector<std::vector<double>> sum(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> count(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++count[assign[i]];
      for (std::size_t t = 0; t < dim; ++t) sum[assign[i]][t] += coords[i][t];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (count[c] == 0) continue;  // empty cluster keeps its center
      for (std::size_t t = 0; t < dim; ++t) centers[c][t] = sum[c][t] / static_cast<double>(count[c]);
    }
  }
  return canonical_labels(assign);
}

StabilityReport stability_check(const DistanceMatrix& a, const DistanceMatrix& b, Linkage linkage) {
  if (a.size() != b.size()) throw InvalidArgument("stability check: matrix sizes differ");
  StabilityReport r;
  r.linkage = linkage;
  for (std::size_t i = 0; i < a.data().size(); ++i) r.delta = std::max(r.delta, std::abs(a.data()[i] - b.data()[i]));
  auto heights = [&](const DistanceMatrix& m) {
    std::vector<double> h;
    for (const Merge& mg : agglomerate(m, linkage).merges) h.push_back(mg.height);
    std::sort(h.begin(), h.end());
    return h;
  };
  const auto ha = heights(a), hb = heights(b);
  for (std::size_t s = 0; s < ha.size(); ++s) r.height_difference = std::max(r.height_difference, std::abs(ha[s] - hb[s]));
  r.asserted = linkage == Linkage::single;
  r.within_bound = r.height_difference <= r.delta;
  return r;
}

namespace {

struct PairCounts {
  double same_both = 0, same_a = 0, same_b = 0, total = 0;
};

PairCounts pair_counts(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) throw InvalidArgument("partitions have different sizes");
  std::map<std::pair<std::size_t, std::size_t>, double> cell;
  std::map<std::size_t, double> row, col;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++cell[{a[i], b[i]}];
    ++row[a[i]];
    ++col[b[i]];
  }
  auto choose2 = [](double x) { return x * (x - 1) / 2; };
  PairCounts c;
  for (const auto& [_, v] : cell) c.same_both += choose2(v);
  for (const auto& [_, v] : row) c.same_a += choose2(v);
  for (const auto& [_, v] : col) c.same_b += choose2(v);
  c.total = choose2(static_cast<double>(a.size()));
  return c;
}

}  // namespace

double rand_index(const Partition& a, const Partition& b) {
  const PairCounts c = pair_counts(a, b);
  if (c.total == 0) return 1.0;
  const double disagreements = c.same_a + c.same_b - 2 * c.same_both;
  return (c.total - disagreements) / c.total;
}

double adjusted_rand_index(const Partition& a, const Partition& b) {
  const PairCounts c = pair_counts(a, b);
  if (c.total == 0) return 1.0;
  const double expected = c.same_a * c.same_b / c.total;
  const double max_index = (c.same_a + c.same_b) / 2;
  if (max_index == expected) return canonical_labels(a) == canonical_labels(b) ? 1.0 : 0.0;
  return (c.same_both - expected) / (max_index - expected);
}

}  // namespace wps
