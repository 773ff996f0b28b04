#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "support.hpp"
#include "wps/cluster.hpp"
#include "wps/error.hpp"

using namespace wps;

namespace {

DistanceMatrix four_points() {
  DistanceMatrix m(4);
  m.set(0, 1, 1);
  m.set(0, 2, 5);
  m.set(0, 3, 6);
  m.set(1, 2, 4);
  m.set(1, 3, 7);
  m.set(2, 3, 2);
  return m;
}

// Partitions equal up to relabeling.
bool same_partition(const Partition& a, const Partition& b) { return canonical_labels(a) == canonical_labels(b); }

// Pair-counting Rand index and ARI straight from the definitions.
std::pair<double, double> naive_rand(const Partition& a, const Partition& b) {
  const std::size_t n = a.size();
  double agree = 0, pairs = 0;
  std::map<std::pair<std::size_t, std::size_t>, double> cells;
  std::map<std::size_t, double> ra, rb;
  for (std::size_t i = 0; i < n; ++i) {
    cells[{a[i], b[i]}] += 1;
    ra[a[i]] += 1;
    rb[b[i]] += 1;
    for (std::size_t j = i + 1; j < n; ++j) {
      pairs += 1;
      if ((a[i] == a[j]) == (b[i] == b[j])) agree += 1;
    }
  }
  auto c2 = [](double x) { return x * (x - 1) / 2; };
  double sc = 0, sa = 0, sb = 0;
  for (const auto& [k, v] : cells) sc += c2(v);
  for (const auto& [k, v] : ra) sa += c2(v);
  for (const auto& [k, v] : rb) sb += c2(v);
  const double expected = sa * sb / c2(static_cast<double>(n));
  const double max_index = 0.5 * (sa + sb);
  return {agree / pairs, (sc - expected) / (max_index - expected)};
}

}  // namespace

TEST_CASE("distance matrix construction") {
  CHECK(distance_matrix(1, [](std::size_t, std::size_t) { return 1.0; }) == DistanceMatrix(1));

  std::atomic<int> calls{0};
  const auto m = distance_matrix(5, [&](std::size_t i, std::size_t j) {
    ++calls;
    CHECK(i < j);
    return static_cast<double>(i + 10 * j);
  });
  CHECK(calls == 10);
  CHECK(m(3, 1) == 31.0);
  CHECK(m(1, 3) == 31.0);
  CHECK(m(2, 2) == 0.0);

  auto seeded = [](std::size_t i, std::size_t j) {
    std::mt19937_64 g(i * 1000 + j);
    return std::uniform_real_distribution<double>(0.0, 1.0)(g);
  };
  CHECK(distance_matrix(40, seeded, 1).data() == distance_matrix(40, seeded, 8).data());

  try {
    distance_matrix(6, [](std::size_t i, std::size_t j) {
      if (i == 2 && j == 4) throw std::runtime_error("boom");
      return 1.0;
    }, 3);
    FAIL("expected PairError");
  } catch (const PairError& e) {
    CHECK(e.i() == 2);
    CHECK(e.j() == 4);
  }
  CHECK_THROWS_AS(distance_matrix(3, [](std::size_t, std::size_t) { return -1.0; }), PairError);
  CHECK_THROWS_AS(distance_matrix(3, [](std::size_t, std::size_t) { return std::nan(""); }), PairError);

  CHECK_THROWS_AS(DistanceMatrix(2, {0.0, 1.0, 2.0, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(DistanceMatrix(2, {1.0, 1.0, 1.0, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(DistanceMatrix(2, {0.0, -1.0, -1.0, 0.0}), InvalidArgument);
}

TEST_CASE("agglomerate examples") {
  DistanceMatrix two(2);
  two.set(0, 1, 0.7);
  const Dendrogram d2 = agglomerate(two, Linkage::single);
  REQUIRE(d2.merges.size() == 1);
  CHECK(d2.merges[0] == Merge{0, 1, 0.7, 2});

  const Dendrogram s = agglomerate(four_points(), Linkage::single);
  REQUIRE(s.merges.size() == 3);
  CHECK(s.merges[0] == Merge{0, 1, 1.0, 4});
  CHECK(s.merges[1] == Merge{2, 3, 2.0, 5});
  CHECK(s.merges[2] == Merge{4, 5, 4.0, 6});

  const Dendrogram c = agglomerate(four_points(), Linkage::complete);
  CHECK(c.merges.back().height == 7.0);

  const Dendrogram a = agglomerate(four_points(), Linkage::average);
  CHECK(a.merges.back().height == (5.0 + 6.0 + 4.0 + 7.0) / 4.0);

  CHECK(agglomerate(DistanceMatrix(1), Linkage::single).merges.empty());
}

TEST_CASE("agglomerate matches the naive re-scan oracle") {
  std::mt19937_64 gen(31);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 2 + gen() % 40;
    // coarse levels force ties through the tie-break
    const DistanceMatrix m = test::dyadic_matrix(gen, n, t % 3 == 0 ? 8 : 1 << 20);
    for (Linkage l : {Linkage::single, Linkage::complete, Linkage::average}) {
      const Dendrogram d = agglomerate(m, l);
      CHECK(d == test::naive_agglomerate(m, l));
      CHECK_NOTHROW(d.validate());
      if (l == Linkage::single)
        for (std::size_t s = 1; s < d.merges.size(); ++s) CHECK(d.merges[s].height >= d.merges[s - 1].height);
    }
  }
}

TEST_CASE("cuts") {
  const Dendrogram s = agglomerate(four_points(), Linkage::single);
  CHECK(cut_k(s, 4) == Partition{0, 1, 2, 3});
  CHECK(cut_k(s, 1) == Partition{0, 0, 0, 0});
  CHECK(cut_k(s, 2) == Partition{0, 0, 1, 1});
  CHECK(cut_height(s, 3.0) == Partition{0, 0, 1, 1});
  CHECK(cut_height(s, 0.5) == Partition{0, 1, 2, 3});
  CHECK(cut_height(s, 4.0) == Partition{0, 0, 0, 0});
  CHECK_THROWS_AS(cut_k(s, 0), InvalidArgument);
  CHECK_THROWS_AS(cut_k(s, 5), InvalidArgument);
  CHECK_THROWS_AS(cut_height(s, -1.0), InvalidArgument);
  CHECK(canonical_labels({7, 3, 7, 9}) == Partition{0, 1, 0, 2});
}

TEST_CASE("cuts are invariant under permutation of the points") {
  std::mt19937_64 gen(32);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 5 + gen() % 30;
    // distinct entries: a random permutation of 1..n(n-1)/2
    std::vector<double> values(n * (n - 1) / 2);
    std::iota(values.begin(), values.end(), 1.0);
    std::shuffle(values.begin(), values.end(), gen);
    DistanceMatrix m(n);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) m.set(i, j, values[idx++]);

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    DistanceMatrix pm(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) pm.set(i, j, m(perm[i], perm[j]));

    for (Linkage l : {Linkage::single, Linkage::complete, Linkage::average}) {
      const std::size_t k = 1 + gen() % n;
      const Partition base = cut_k(agglomerate(m, l), k);
      const Partition moved = cut_k(agglomerate(pm, l), k);
      Partition back(n);
      for (std::size_t i = 0; i < n; ++i) back[perm[i]] = moved[i];
      CHECK(same_partition(back, base));
    }
  }
}

TEST_CASE("newick") {
  CHECK(to_newick(agglomerate(four_points(), Linkage::single)) == "((0:1,1:1):3,(2:2,3:2):2);");
  DistanceMatrix one(1);
  CHECK(to_newick(agglomerate(one, Linkage::single)) == "0;");
}

TEST_CASE("k-means baseline") {
  std::mt19937_64 gen(33);
  std::normal_distribution<double> noise(0.0, 0.1);
  std::vector<std::vector<double>> pts;
  Partition truth;
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < 25; ++i) {
      pts.push_back({c * 1.0 + noise(gen), noise(gen)});
      truth.push_back(c);
    }
  // blob separation is 10x the spread
  CHECK(same_partition(kmeans_baseline(pts, 2, 5), truth));
  CHECK(kmeans_baseline(pts, 2, 5) == kmeans_baseline(pts, 2, 5));
  CHECK(kmeans_baseline(pts, 1, 5) == Partition(pts.size(), 0));
  CHECK_THROWS_AS(kmeans_baseline(pts, 0, 5), InvalidArgument);
  CHECK_THROWS_AS(kmeans_baseline(pts, 51, 5), InvalidArgument);
}

TEST_CASE("stability of single-linkage heights") {
  std::mt19937_64 gen(34);
  const DistanceMatrix a = test::dyadic_matrix(gen, 20);

  const StabilityReport same = stability_check(a, a, Linkage::single);
  CHECK(same.delta == 0.0);
  CHECK(same.height_difference == 0.0);
  CHECK(same.within_bound);
  CHECK(same.asserted);

  // a dyadic shift is exact in floating point
  DistanceMatrix shifted(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) shifted.set(i, j, a(i, j) + 1.0 / 128);
  const StabilityReport sh = stability_check(a, shifted, Linkage::single);
  CHECK(sh.delta == 1.0 / 128);
  CHECK(sh.height_difference == 1.0 / 128);

  DistanceMatrix shifted01(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) shifted01.set(i, j, a(i, j) + 0.01);
  const StabilityReport s01 = stability_check(a, shifted01, Linkage::single);
  CHECK(s01.height_difference == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(s01.within_bound);

  std::uniform_real_distribution<double> u(-0.05, 0.05);
  for (int t = 0; t < 20; ++t) {
    const DistanceMatrix m = test::dyadic_matrix(gen, 2 + gen() % 40);
    DistanceMatrix p(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = i + 1; j < m.size(); ++j) p.set(i, j, std::max(0.0, m(i, j) + u(gen)));
    const StabilityReport r = stability_check(m, p, Linkage::single);
    CHECK(r.height_difference <= r.delta);
    CHECK(r.within_bound);
    CHECK(!stability_check(m, p, Linkage::average).asserted);
  }
  CHECK_THROWS_AS(stability_check(DistanceMatrix(2), DistanceMatrix(3), Linkage::single), InvalidArgument);
}

TEST_CASE("rand and adjusted rand index") {
  CHECK(adjusted_rand_index({0, 0, 1, 1}, {5, 5, 2, 2}) == 1.0);
  CHECK(rand_index({0, 0, 1, 1}, {1, 1, 0, 0}) == 1.0);
  CHECK(adjusted_rand_index({0, 0, 0}, {0, 0, 0}) == 1.0);
  std::mt19937_64 gen(35);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 3 + gen() % 30;
    Partition a(n), b(n);
    for (auto& x : a) x = gen() % 4;
    for (auto& x : b) x = gen() % 3;
    const auto [ri, ari] = naive_rand(a, b);
    CHECK(rand_index(a, b) == doctest::Approx(ri).epsilon(1e-12));
    // the ARI denominator vanishes when both partitions are trivial
    if (std::set<std::size_t>(a.begin(), a.end()).size() > 1 && std::set<std::size_t>(b.begin(), b.end()).size() > 1)
      CHECK(adjusted_rand_index(a, b) == doctest::Approx(ari).epsilon(1e-12));
  }
  CHECK_THROWS_AS(rand_index({0, 1}, {0}), InvalidArgument);
}
