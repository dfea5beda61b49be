#pragma once

// Matrix-decorated graphs and step graphons: edge decorations are
// 2^L x 2^L matrices indexed by layer subsets (empty subset included),
// paired through the Hilbert-Schmidt inner product. Covers the decorated
// intersection graphs of pair partitions, compressed grid graphs, the
// lexicographic limit decoration, and decorated homomorphism densities.

#include "epsclt/graphon.hpp"
#include "epsclt/partitions.hpp"
#include "epsclt/scalar.hpp"
#include "epsclt/subsets.hpp"

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace epsclt {

// Dense 2^L x 2^L matrix, rows/columns indexed by subset masks 0..2^L-1.
template <ScalarType S>
class MLMatrixT {
public:
  explicit MLMatrixT(int L) : L_(L) {
    if (L < 1 || L > kMaxLayers) throw std::domain_error("matrix decoration: layer count out of range");
    d_ = 1 << L;
    a_.assign(static_cast<std::size_t>(d_) * d_, scalar_ops<S>::from_int(0));
  }

  // Matrix unit P_{IJ}: 1 in entry (I, J), 0 elsewhere.
  static MLMatrixT basis(int L, Subset I, Subset J) {
    MLMatrixT m(L);
    m.at(I, J) = scalar_ops<S>::from_int(1);
    return m;
  }

  int layers() const { return L_; }
  int dim() const { return d_; }

  const S& at(Subset I, Subset J) const { return a_[idx(I, J)]; }
  S& at(Subset I, Subset J) { return a_[idx(I, J)]; }

  // Hilbert-Schmidt pairing <A, B> = sum_{I,J} A_{IJ} B_{IJ} (real entries).
  S inner(const MLMatrixT& o) const {
    if (L_ != o.L_) throw std::domain_error("matrix decoration: layer counts differ");
    const S zero = scalar_ops<S>::from_int(0);
    Accumulator<S> acc;
    for (std::size_t t = 0; t < a_.size(); ++t)
      if (!(a_[t] == zero) && !(o.a_[t] == zero)) acc.add(a_[t] * o.a_[t]);
    return acc.total();
  }

  S hs_norm_sq() const { return inner(*this); }

  MLMatrixT transpose() const {
    MLMatrixT m(L_);
    for (Subset I = 0; I < static_cast<Subset>(d_); ++I)
      for (Subset J = 0; J < static_cast<Subset>(d_); ++J) m.at(J, I) = at(I, J);
    return m;
  }

  bool is_zero() const {
    const S zero = scalar_ops<S>::from_int(0);
    for (const auto& x : a_)
      if (!(x == zero)) return false;
    return true;
  }

  bool operator==(const MLMatrixT& o) const { return L_ == o.L_ && a_ == o.a_; }

private:
  std::size_t idx(Subset I, Subset J) const {
    if (I >= static_cast<Subset>(d_) || J >= static_cast<Subset>(d_))
      throw std::domain_error("matrix decoration: subset index out of range");
    return static_cast<std::size_t>(I) * d_ + J;
  }

  int L_;
  int d_;
  std::vector<S> a_;
};

using MLMatrix = MLMatrixT<Rational>;

// ====== decorated graphs ======

// A simple graph whose edges carry matrix decorations, one per orientation.
// Both orientations are stored explicitly; non-edges (and the diagonal) act
// as the zero matrix, so "all maps" homomorphism sums are well defined.
template <ScalarType S>
class DecoratedGraphT {
public:
  DecoratedGraphT(SimpleGraph g, int L) : g_(std::move(g)), L_(L) {
    if (L < 1 || L > kMaxLayers) throw std::domain_error("decorated graph: layer count out of range");
  }

  // Adds the edge and its decorations. The two orientations must have equal
  // Hilbert-Schmidt norms (they describe the same undirected edge).
  void set_edge(int u, int v, MLMatrixT<S> uv, MLMatrixT<S> vu) {
    if (uv.layers() != L_ || vu.layers() != L_)
      throw std::domain_error("decorated graph: decoration layer count differs from graph");
    if (!(uv.hs_norm_sq() == vu.hs_norm_sq()))
      throw std::domain_error("decorated graph: orientation decorations have different HS norms");
    g_.add_edge(u, v);
    beta_.emplace(key(u, v), std::move(uv));
    beta_.emplace(key(v, u), std::move(vu));
  }

  const MLMatrixT<S>& beta(int u, int v) const {
    auto it = beta_.find(key(u, v));
    if (it == beta_.end()) throw std::domain_error("decorated graph: no decoration on that oriented pair");
    return it->second;
  }

  bool has_edge(int u, int v) const { return g_.has_edge(u, v); }
  const SimpleGraph& graph() const { return g_; }
  int layers() const { return L_; }
  int vertex_count() const { return g_.vertex_count(); }
  std::vector<std::pair<int, int>> edges() const { return g_.edges(); }

private:
  long long key(int u, int v) const {
    return static_cast<long long>(u) * (g_.vertex_count() + 1) + v;
  }

  SimpleGraph g_;
  int L_;
  std::map<long long, MLMatrixT<S>> beta_;
};

using DecoratedGraph = DecoratedGraphT<Rational>;

// ====== decorated step graphons ======

// Step function [0,1]^2 -> matrices: cell (i,j) carries a matrix, with
// cell(j,i) the transpose of cell(i,j) (orientation consistency).
template <ScalarType S>
class DecoratedStepGraphonT {
public:
  DecoratedStepGraphonT(std::vector<S> breaks, int L, std::vector<std::vector<MLMatrixT<S>>> cells)
      : breaks_(std::move(breaks)), L_(L), cells_(std::move(cells)) {
    if (breaks_.size() < 2) throw std::domain_error("decorated graphon: need at least breaks 0 and 1");
    const S zero = scalar_ops<S>::from_int(0);
    const S one = scalar_ops<S>::from_int(1);
    if (!(breaks_.front() == zero) || !(breaks_.back() == one))
      throw std::domain_error("decorated graphon: breaks must start at 0 and end at 1");
    for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
      if (!(breaks_[i] < breaks_[i + 1]))
        throw std::domain_error("decorated graphon: breaks must be strictly increasing");
    std::size_t m = breaks_.size() - 1;
    if (cells_.size() != m) throw std::domain_error("decorated graphon: cells must be m x m");
    for (const auto& row : cells_) {
      if (row.size() != m) throw std::domain_error("decorated graphon: cells must be m x m");
      for (const auto& mat : row)
        if (mat.layers() != L_) throw std::domain_error("decorated graphon: cell layer count differs");
    }
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (!(cells_[i][j] == cells_[j][i].transpose()))
          throw std::domain_error("decorated graphon: cells must be transpose-symmetric");
  }

  int cell_count() const { return static_cast<int>(breaks_.size()) - 1; }
  int layers() const { return L_; }
  S width(int i) const {
    return breaks_[static_cast<std::size_t>(i) + 1] - breaks_[static_cast<std::size_t>(i)];
  }
  const MLMatrixT<S>& cell(int i, int j) const {
    return cells_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }

private:
  std::vector<S> breaks_;
  int L_;
  std::vector<std::vector<MLMatrixT<S>>> cells_;
};

using DecoratedStepGraphon = DecoratedStepGraphonT<Rational>;

// ====== constructions ======

// Decorated intersection graph of a pair partition pi for the word spec
// (J, alpha): one vertex per block (canonical order) plus a tail vertex
// xi placed last. Interleaving blocks u, v get the matrix unit P_{J_u J_v};
// blocks whose two adjoint marks agree get an edge to xi decorated
// P_{J_u, empty} (and P_{empty, J_u} on the reverse orientation).
// Requires J constant on every block of pi.
template <ScalarType S>
DecoratedGraphT<S> decorated_intersection_graph(const PairPartition& pi, const WordSpec& spec) {
  spec.validate();
  if (pi.size() != spec.length())
    throw std::domain_error("decorated intersection graph: partition and word lengths differ");
  const auto& pairs = pi.pairs();
  int q = pi.block_count();
  for (auto [r, s] : pairs)
    if (spec.J[static_cast<std::size_t>(r - 1)] != spec.J[static_cast<std::size_t>(s - 1)])
      throw std::domain_error("decorated intersection graph: subsets must be constant on blocks");
  int xi = q + 1;
  DecoratedGraphT<S> F(SimpleGraph(q + 1), spec.L);
  for (auto [a, b] : pi.crossing_block_pairs()) {
    Subset Ja = spec.J[static_cast<std::size_t>(pairs[static_cast<std::size_t>(a)].first - 1)];
    Subset Jb = spec.J[static_cast<std::size_t>(pairs[static_cast<std::size_t>(b)].first - 1)];
    F.set_edge(a + 1, b + 1, MLMatrixT<S>::basis(spec.L, Ja, Jb), MLMatrixT<S>::basis(spec.L, Jb, Ja));
  }
  for (int u = 0; u < q; ++u) {
    auto [r, s] = pairs[static_cast<std::size_t>(u)];
    if (spec.alpha[static_cast<std::size_t>(r - 1)] == spec.alpha[static_cast<std::size_t>(s - 1)]) {
      Subset Ju = spec.J[static_cast<std::size_t>(r - 1)];
      F.set_edge(u + 1, xi, MLMatrixT<S>::basis(spec.L, Ju, 0), MLMatrixT<S>::basis(spec.L, 0, Ju));
    }
  }
  return F;
}

// Compressed form of a grid graph g on n sites and L layers: the complete
// graph K_n with, on the oriented pair (u, v), the 0/1 matrix
//   (J1, J2) entry:  all layer pairs in J1 x J2 adjacent across (u, v);
//   (J1, {}) entry:  all distinct layer pairs of J1 adjacent within u;
//   ({}, J2) entry:  all distinct layer pairs of J2 adjacent within v;
//   ({}, {}) entry:  1.
template <ScalarType S>
DecoratedGraphT<S> compressed_grid(const GridGraph& g) {
  int n = g.sites(), L = g.layers();
  if (n < 2) throw std::domain_error("compressed grid: need at least two sites");
  DecoratedGraphT<S> G(SimpleGraph(n), L);
  const Subset d = full_subset(L);
  auto entry = [&](int u, int v, Subset J1, Subset J2) -> S {
    bool ok;
    if (J1 == 0 && J2 == 0)
      ok = true;
    else if (J2 == 0)
      ok = g.intra_complete(u, J1);
    else if (J1 == 0)
      ok = g.intra_complete(v, J2);
    else
      ok = g.cross_complete(u, J1, v, J2);
    return scalar_ops<S>::from_int(ok ? 1 : 0);
  };
  for (int u = 1; u <= n; ++u) {
    for (int v = u + 1; v <= n; ++v) {
      MLMatrixT<S> uv(L), vu(L);
      for (Subset J1 = 0; J1 <= d; ++J1) {
        for (Subset J2 = 0; J2 <= d; ++J2) {
          uv.at(J1, J2) = entry(u, v, J1, J2);
          vu.at(J1, J2) = entry(v, u, J1, J2);
        }
      }
      G.set_edge(u, v, std::move(uv), std::move(vu));
    }
  }
  return G;
}

// Limit decoration of a lexicographic family over gL with site limit w:
// on every cell (x, y),
//   (J1, J2) entry:  [all distinct layer pairs in J1 x J2 in E(gL)] times
//                    w(x,y) when J1 and J2 share a layer, times 1 otherwise;
//   (J1, {}) and ({}, J2) entries: [J1 resp. J2 complete in gL];
//   ({}, {}) entry:  1.
template <ScalarType S>
DecoratedStepGraphonT<S> lex_limit_decoration(const SimpleGraph& gL, const StepGraphonT<S>& w) {
  int L = gL.vertex_count();
  if (L < 1 || L > kMaxLayers) throw std::domain_error("limit decoration: layer count out of range");
  const Subset d = full_subset(L);
  const S one = scalar_ops<S>::from_int(1);
  const S zero = scalar_ops<S>::from_int(0);
  auto intra = [&](Subset J) -> bool { return gL.is_complete_on(subset_elements(J)); };
  auto cross = [&](Subset J1, Subset J2) -> bool {
    for (int l1 : subset_elements(J1))
      for (int l2 : subset_elements(J2))
        if (l1 != l2 && !gL.has_edge(l1, l2)) return false;
    return true;
  };
  int m = w.cell_count();
  std::vector<std::vector<MLMatrixT<S>>> cells(
      static_cast<std::size_t>(m), std::vector<MLMatrixT<S>>(static_cast<std::size_t>(m), MLMatrixT<S>(L)));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      MLMatrixT<S>& mat = cells[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      for (Subset J1 = 0; J1 <= d; ++J1) {
        for (Subset J2 = 0; J2 <= d; ++J2) {
          S val;
          if (J1 == 0 && J2 == 0)
            val = one;
          else if (J2 == 0)
            val = intra(J1) ? one : zero;
          else if (J1 == 0)
            val = intra(J2) ? one : zero;
          else if (!cross(J1, J2))
            val = zero;
          else
            val = (J1 & J2) != 0 ? w.value(i, j) : one;
          mat.at(J1, J2) = val;
        }
      }
    }
  }
  std::vector<S> breaks = w.breaks();
  return DecoratedStepGraphonT<S>(std::move(breaks), L, std::move(cells));
}

// ====== decorated homomorphism sums ======

enum class HomMode { all, injective };

// hom(F, G) (or its injective variant): sum over vertex maps of the product
// over F-edges (u < v) of <beta_F(u,v), gamma_G(phi(u), phi(v))>. Maps that
// collapse an F-edge or land on a G-non-edge contribute 0.
template <ScalarType S>
S hom_sum(const DecoratedGraphT<S>& F, const DecoratedGraphT<S>& G, HomMode mode,
          const Budget& budget = Budget()) {
  if (F.layers() != G.layers()) throw std::domain_error("hom_sum: layer counts differ");
  int vf = F.vertex_count();
  int n = G.vertex_count();
  if (vf < 1 || n < 1) throw std::domain_error("hom_sum: empty graph");
  auto edges = F.edges();
  const S zero = scalar_ops<S>::from_int(0);
  Accumulator<S> acc;
  std::vector<int> phi(static_cast<std::size_t>(vf), 0);
  std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
  // Depth-first assignment with early zero pruning.
  auto rec = [&](auto&& self, int depth, const S& partial) -> void {
    if (depth == vf) {
      acc.add(partial);
      return;
    }
    for (int target = 1; target <= n; ++target) {
      if (mode == HomMode::injective && used[static_cast<std::size_t>(target)]) continue;
      budget.charge();
      phi[static_cast<std::size_t>(depth)] = target;
      S next = partial;
      bool dead = false;
      for (auto [a, b] : edges) {
        int ia = a - 1, ib = b - 1;
        if (ia != depth && ib != depth) continue;
        if (ia > depth || ib > depth) continue;  // other endpoint not assigned yet
        int pu = phi[static_cast<std::size_t>(ia)], pv = phi[static_cast<std::size_t>(ib)];
        if (pu == pv || !G.has_edge(pu, pv)) { dead = true; break; }
        S factor = F.beta(a, b).inner(G.beta(pu, pv));
        if (factor == zero) { dead = true; break; }
        next *= factor;
      }
      if (!dead) {
        used[static_cast<std::size_t>(target)] = 1;
        self(self, depth + 1, next);
        used[static_cast<std::size_t>(target)] = 0;
      }
    }
  };
  rec(rec, 0, scalar_ops<S>::from_int(1));
  return acc.total();
}

// rho(F, G) = hom(F, G) / n^{|V(F)|} in either mode.
template <ScalarType S>
S rho_in_graph(const DecoratedGraphT<S>& F, const DecoratedGraphT<S>& G, HomMode mode,
               const Budget& budget = Budget()) {
  S total = hom_sum(F, G, mode, budget);
  S denom = pow_nonneg(scalar_ops<S>::from_int(G.vertex_count()), static_cast<unsigned>(F.vertex_count()));
  return total / denom;
}

// rho(F, w): integral over cell assignments of widths times HS pairings
// over F-edges.
template <ScalarType S>
S rho_decorated(const DecoratedGraphT<S>& F, const DecoratedStepGraphonT<S>& w,
                const Budget& budget = Budget()) {
  if (F.layers() != w.layers()) throw std::domain_error("rho_decorated: layer counts differ");
  int vf = F.vertex_count();
  int m = w.cell_count();
  auto edges = F.edges();
  const S zero = scalar_ops<S>::from_int(0);
  std::uint64_t total = 1;
  for (int t = 0; t < vf; ++t) {
    if (total > UINT64_MAX / static_cast<std::uint64_t>(m)) throw BudgetError(UINT64_MAX, budget.limit());
    total *= static_cast<std::uint64_t>(m);
  }
  budget.require(total);
  std::vector<int> cell(static_cast<std::size_t>(vf), 0);
  Accumulator<S> acc;
  while (true) {
    budget.charge();
    S term = scalar_ops<S>::from_int(1);
    for (int u = 0; u < vf; ++u) term *= w.width(cell[static_cast<std::size_t>(u)]);
    if (!(term == zero)) {
      for (auto [a, b] : edges) {
        term *= F.beta(a, b).inner(w.cell(cell[static_cast<std::size_t>(a - 1)], cell[static_cast<std::size_t>(b - 1)]));
        if (term == zero) break;
      }
    }
    acc.add(term);
    int pos = 0;
    while (pos < vf && ++cell[static_cast<std::size_t>(pos)] == m) {
      cell[static_cast<std::size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == vf) break;
  }
  return acc.total();
}

}  // namespace epsclt
