#pragma once

// Finite simple graphs, grid graphs over vertex x layer pairs, the
// lexicographic product, and the subset-compatibility graph h(g_L).

#include "epsclt/subsets.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace epsclt {

// Undirected, loopless, 1-based vertices. Adjacency kept as packed bits so
// membership tests stay O(1) in the hot enumeration loops.
class SimpleGraph {
public:
  SimpleGraph() = default;

  explicit SimpleGraph(int n) : n_(n) {
    if (n < 0) throw std::domain_error("graph: negative vertex count");
    adj_.assign(static_cast<std::size_t>(n) * words_per_row(), 0);
  }

  SimpleGraph(int n, const std::vector<std::pair<int, int>>& edges) : SimpleGraph(n) {
    for (auto [u, v] : edges) add_edge(u, v);
  }

  static SimpleGraph complete(int n) {
    SimpleGraph g(n);
    for (int u = 1; u <= n; ++u)
      for (int v = u + 1; v <= n; ++v) g.add_edge(u, v);
    return g;
  }

  static SimpleGraph edgeless(int n) { return SimpleGraph(n); }

  // Path 1 - 2 - ... - n.
  static SimpleGraph line(int n) {
    SimpleGraph g(n);
    for (int u = 1; u < n; ++u) g.add_edge(u, u + 1);
    return g;
  }

  int vertex_count() const { return n_; }

  void add_edge(int u, int v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw std::domain_error("graph: loops are not allowed");
    set_bit(u, v);
    set_bit(v, u);
  }

  // False for loops and out-of-range queries never happen by contract;
  // vertices must be in [1, n].
  bool has_edge(int u, int v) const {
    check_vertex(u);
    check_vertex(v);
    if (u == v) return false;
    std::size_t bit = static_cast<std::size_t>(v - 1);
    return (adj_[row_offset(u) + bit / 64] >> (bit % 64)) & 1u;
  }

  long long edge_count() const {
    long long c = 0;
    for (int u = 1; u <= n_; ++u)
      for (int v = u + 1; v <= n_; ++v)
        if (has_edge(u, v)) ++c;
    return c;
  }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 1; u <= n_; ++u)
      for (int v = u + 1; v <= n_; ++v)
        if (has_edge(u, v)) out.emplace_back(u, v);
    return out;
  }

  // True when every two distinct vertices of S are adjacent.
  bool is_complete_on(const std::vector<int>& S) const {
    for (std::size_t a = 0; a < S.size(); ++a)
      for (std::size_t b = a + 1; b < S.size(); ++b)
        if (S[a] != S[b] && !has_edge(S[a], S[b])) return false;
    return true;
  }

  bool operator==(const SimpleGraph& o) const { return n_ == o.n_ && adj_ == o.adj_; }

private:
  std::size_t words_per_row() const { return (static_cast<std::size_t>(n_) + 63) / 64; }
  std::size_t row_offset(int u) const { return static_cast<std::size_t>(u - 1) * words_per_row(); }
  void set_bit(int u, int v) {
    std::size_t bit = static_cast<std::size_t>(v - 1);
    adj_[row_offset(u) + bit / 64] |= std::uint64_t{1} << (bit % 64);
  }
  void check_vertex(int u) const {
    if (u < 1 || u > n_) throw std::domain_error("graph: vertex " + std::to_string(u) + " out of range [1," + std::to_string(n_) + "]");
  }

  int n_ = 0;
  std::vector<std::uint64_t> adj_;
};

// ====== grid graphs ======

// A graph on pairs (k, l), k in [1,n] sites, l in [1,L] layers. Flat vertex
// numbering is (k-1)*L + l, 1-based, so layers of one site are contiguous.
class GridGraph {
public:
  GridGraph(int n, int L) : n_(n), L_(L), flat_(check_dims(n, L) * L) {}

  static int flat_index(int k, int l, int L) { return (k - 1) * L + l; }

  int sites() const { return n_; }
  int layers() const { return L_; }

  int flat(int k, int l) const {
    check_site(k);
    check_layer(l);
    return flat_index(k, l, L_);
  }

  void add_edge(int k1, int l1, int k2, int l2) { flat_.add_edge(flat(k1, l1), flat(k2, l2)); }

  bool has_edge(int k1, int l1, int k2, int l2) const {
    return flat_.has_edge(flat(k1, l1), flat(k2, l2));
  }

  const SimpleGraph& flat_graph() const { return flat_; }
  SimpleGraph& flat_graph() { return flat_; }

  // All layer pairs (l1, l2), l1 != l2, of J adjacent within site k.
  bool intra_complete(int k, Subset J) const {
    std::vector<int> els = subset_elements(J);
    for (std::size_t a = 0; a < els.size(); ++a)
      for (std::size_t b = a + 1; b < els.size(); ++b)
        if (!has_edge(k, els[a], k, els[b])) return false;
    return true;
  }

  // All pairs (l1, l2) in J1 x J2 adjacent across sites k1 != k2
  // (including l1 == l2).
  bool cross_complete(int k1, Subset J1, int k2, Subset J2) const {
    for (int l1 : subset_elements(J1))
      for (int l2 : subset_elements(J2))
        if (!has_edge(k1, l1, k2, l2)) return false;
    return true;
  }

private:
  static int check_dims(int n, int L) {
    if (n < 1) throw std::domain_error("grid graph: need at least one site");
    if (L < 1 || L > kMaxLayers) throw std::domain_error("grid graph: layer count out of range");
    return n;
  }
  void check_site(int k) const {
    if (k < 1 || k > n_) throw std::domain_error("grid graph: site out of range");
  }
  void check_layer(int l) const {
    if (l < 1 || l > L_) throw std::domain_error("grid graph: layer out of range");
  }

  int n_, L_;
  SimpleGraph flat_;
};

// Lexicographic-style product: sites carry gp, layers carry gL.
//   ((k1,l), (k2,l))  edge for every (k1,k2) in E(gp) and every layer l;
//   ((k1,l1), (k2,l2)) edge for every (l1,l2) in E(gL) and all sites k1,k2.
// Edge count is L*|E(gp)| + |E(gL)|*n^2.
inline GridGraph lexicographic_product(const SimpleGraph& gp, const SimpleGraph& gL) {
  int n = gp.vertex_count(), L = gL.vertex_count();
  GridGraph g(n, L);
  for (auto [k1, k2] : gp.edges())
    for (int l = 1; l <= L; ++l) g.add_edge(k1, l, k2, l);
  for (auto [l1, l2] : gL.edges())
    for (int k1 = 1; k1 <= n; ++k1)
      for (int k2 = 1; k2 <= n; ++k2)
        if (!(k1 == k2 && l1 == l2)) g.add_edge(k1, l1, k2, l2);
  return g;
}

// Compatibility graph on the nonempty layer subsets (canonical order,
// 1-based): J1 ~ J2 iff every ordered pair in J1 x J2 is an edge of gL.
// Overlapping subsets are never adjacent (a shared layer would need a loop).
inline SimpleGraph h_graph(const SimpleGraph& gL) {
  int L = gL.vertex_count();
  std::vector<Subset> subs = nonempty_subsets(L);
  SimpleGraph h(static_cast<int>(subs.size()));
  for (std::size_t a = 0; a < subs.size(); ++a) {
    for (std::size_t b = a + 1; b < subs.size(); ++b) {
      bool ok = true;
      for (int l1 : subset_elements(subs[a])) {
        for (int l2 : subset_elements(subs[b])) {
          if (l1 == l2 || !gL.has_edge(l1, l2)) { ok = false; break; }
        }
        if (!ok) break;
      }
      if (ok) h.add_edge(static_cast<int>(a) + 1, static_cast<int>(b) + 1);
    }
  }
  return h;
}

// n-fold equal blow-up of a pattern graph: n = m*t sites split into m
// groups of t; (u,v) adjacent iff their groups are adjacent in the pattern.
// Realizes the step graphon of the pattern exactly at every such n.
inline SimpleGraph blowup_graph(const SimpleGraph& pattern, int n) {
  int m = pattern.vertex_count();
  if (m < 1) throw std::domain_error("blow-up: empty pattern");
  if (n < 1 || n % m != 0)
    throw std::domain_error("blow-up: n must be a positive multiple of " + std::to_string(m));
  int t = n / m;
  SimpleGraph g(n);
  for (int u = 1; u <= n; ++u) {
    for (int v = u + 1; v <= n; ++v) {
      int gu = (u - 1) / t + 1, gv = (v - 1) / t + 1;
      if (gu != gv && pattern.has_edge(gu, gv)) g.add_edge(u, v);
    }
  }
  return g;
}

}  // namespace epsclt
