#pragma once

// Shared deterministic generators for the test suite. Every random object
// comes from an explicitly seeded engine so failures reproduce exactly.

#include "epsclt/epsclt.hpp"

#include <random>
#include <utility>
#include <vector>

namespace epsclt::testing {

using Rng = std::mt19937_64;

inline int rand_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool rand_bool(Rng& rng) { return rand_int(rng, 0, 1) == 1; }

// Uniform rational with numerator in [num_lo, num_hi] and denominator in
// [1, den_hi].
inline Rational rand_rational(Rng& rng, int num_lo, int num_hi, int den_hi) {
  return Rational(rand_int(rng, num_lo, num_hi), rand_int(rng, 1, den_hi));
}

// Erdos-Renyi-style graph: each possible edge kept with probability
// num/den.
inline SimpleGraph rand_graph(Rng& rng, int n, int num = 1, int den = 2) {
  SimpleGraph g(n);
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v)
      if (rand_int(rng, 1, den) <= num) g.add_edge(u, v);
  return g;
}

// Random grid graph on n sites and L layers with arbitrary flat edges.
inline GridGraph rand_grid_graph(Rng& rng, int n, int L, int num = 1, int den = 2) {
  GridGraph g(n, L);
  int total = n * L;
  for (int a = 1; a <= total; ++a)
    for (int b = a + 1; b <= total; ++b)
      if (rand_int(rng, 1, den) <= num) g.flat_graph().add_edge(a, b);
  return g;
}

// Uniform perfect matching of {1..p} (p even).
inline PairPartition rand_pair_partition(Rng& rng, int p) {
  std::vector<int> avail;
  for (int r = 1; r <= p; ++r) avail.push_back(r);
  std::vector<std::pair<int, int>> pairs;
  while (!avail.empty()) {
    int r = avail.front();
    avail.erase(avail.begin());
    int pick = rand_int(rng, 0, static_cast<int>(avail.size()) - 1);
    int s = avail[static_cast<std::size_t>(pick)];
    avail.erase(avail.begin() + pick);
    pairs.emplace_back(r, s);
  }
  return PairPartition(p, std::move(pairs));
}

// Random set partition of {1..k} by uniformly assigning each element to a
// slot and discarding empty slots.
inline SetPartition rand_partition(Rng& rng, int k) {
  std::vector<std::vector<int>> slots(static_cast<std::size_t>(k));
  for (int r = 1; r <= k; ++r) slots[static_cast<std::size_t>(rand_int(rng, 0, k - 1))].push_back(r);
  std::vector<std::vector<int>> blocks;
  for (auto& b : slots)
    if (!b.empty()) blocks.push_back(std::move(b));
  return SetPartition(k, std::move(blocks));
}

// Random formal law given by rational moments (m_1 .. m_depth).
inline ScalarLaw rand_law(Rng& rng, int depth, int span = 4, int den = 3) {
  std::vector<Rational> m;
  for (int t = 1; t <= depth; ++t) m.push_back(rand_rational(rng, -span, span, den));
  return ScalarLaw(std::move(m));
}

// Random adjoint-mark word of length p.
inline AlphaWord rand_alpha(Rng& rng, int p) {
  AlphaWord a(static_cast<std::size_t>(p));
  for (auto& x : a) x = rand_bool(rng) ? Star::star : Star::one;
  return a;
}

// All simple graphs on n labelled vertices, enumerated by edge mask.
inline std::vector<SimpleGraph> all_graphs(int n) {
  std::vector<std::pair<int, int>> slots;
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) slots.emplace_back(u, v);
  std::vector<SimpleGraph> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    SimpleGraph g(n);
    for (std::size_t t = 0; t < slots.size(); ++t)
      if ((mask >> t) & 1u) g.add_edge(slots[t].first, slots[t].second);
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace epsclt::testing
