#pragma once

// Exact pre-limit moments: expansion of layered-product words into grid
// letters, the restricted-kernel density rho_n and its injective-density
// product form, moments of normalized sums over deterministic grid
// families (with a partition-class fast path), and finite-vs-limit
// convergence tables.

#include "epsclt/cumulants.hpp"
#include "epsclt/graphon.hpp"
#include "epsclt/graphs.hpp"
#include "epsclt/limit_laws.hpp"
#include "epsclt/partitions.hpp"
#include "epsclt/scalar.hpp"
#include "epsclt/subsets.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace epsclt {

// ====== word expansion ======

// The expanded form of (b_{i_1}^{(J_1)})^{alpha_1} ... as single-layer
// letters (site, layer).
struct GridWord {
  int L = 0;
  std::vector<std::pair<int, int>> letters;  // (site k, layer l), 1-based

  int length() const { return static_cast<int>(letters.size()); }

  // Flat grid-vertex ids, matching GridGraph::flat_index.
  IndexTuple flat() const {
    IndexTuple out;
    out.reserve(letters.size());
    for (auto [k, l] : letters) out.push_back(GridGraph::flat_index(k, l, L));
    return out;
  }
};

// Concatenates the letters of each factor: layers of J_r ascending for
// exponent 1, descending for * (the adjoint of a product of self-adjoint
// factors reverses their order).
inline GridWord expand_word(const IndexTuple& i, const WordSpec& spec) {
  spec.validate();
  if (static_cast<int>(i.size()) != spec.length())
    throw std::domain_error("expand_word: index tuple and word lengths differ");
  GridWord out;
  out.L = spec.L;
  for (int r = 0; r < spec.length(); ++r) {
    int site = i[static_cast<std::size_t>(r)];
    if (site < 1) throw std::domain_error("expand_word: sites are 1-based");
    std::vector<int> layers = subset_elements(spec.J[static_cast<std::size_t>(r)]);
    if (spec.alpha[static_cast<std::size_t>(r)] == Star::star)
      std::reverse(layers.begin(), layers.end());
    for (int l : layers) out.letters.emplace_back(site, l);
  }
  return out;
}

// ====== block-local admissibility on a concrete grid ======

// The two block-local conditions characterizing when the expanded word's
// letter kernel is an admissible pairing on the grid:
//   (1) a block whose two adjoint marks agree needs its layer set
//       intra-complete at the block's site;
//   (2) interleaving blocks need every cross pair (l1, l2) in J_u x J_v
//       present between their sites.
// Requires ker(i) = pi: i constant on blocks, distinct across blocks.
inline bool grid_word_conditions(const GridGraph& g, const PairPartition& pi, const WordSpec& spec,
                                 const IndexTuple& i) {
  spec.validate();
  if (spec.L != g.layers()) throw std::domain_error("grid word conditions: layer counts differ");
  int p = spec.length();
  if (pi.size() != p || static_cast<int>(i.size()) != p)
    throw std::domain_error("grid word conditions: length mismatch");
  const auto& pairs = pi.pairs();
  std::vector<int> site(pairs.size());
  for (std::size_t u = 0; u < pairs.size(); ++u) {
    auto [r, s] = pairs[u];
    if (spec.J[static_cast<std::size_t>(r - 1)] != spec.J[static_cast<std::size_t>(s - 1)])
      throw std::domain_error("grid word conditions: layer sets must agree on blocks");
    if (i[static_cast<std::size_t>(r - 1)] != i[static_cast<std::size_t>(s - 1)])
      throw std::domain_error("grid word conditions: sites must agree on blocks");
    site[u] = i[static_cast<std::size_t>(r - 1)];
    if (site[u] < 1 || site[u] > g.sites())
      throw std::domain_error("grid word conditions: site out of range");
    for (std::size_t v = 0; v < u; ++v)
      if (site[v] == site[u])
        throw std::domain_error("grid word conditions: distinct blocks need distinct sites");
  }
  for (std::size_t u = 0; u < pairs.size(); ++u) {
    auto [r, s] = pairs[u];
    if (spec.alpha[static_cast<std::size_t>(r - 1)] == spec.alpha[static_cast<std::size_t>(s - 1)] &&
        !g.intra_complete(site[u], spec.J[static_cast<std::size_t>(r - 1)]))
      return false;
  }
  for (auto [a, b] : pi.crossing_block_pairs()) {
    auto [r, s] = pairs[static_cast<std::size_t>(a)];
    auto [r2, s2] = pairs[static_cast<std::size_t>(b)];
    (void)s;
    (void)s2;
    if (!g.cross_complete(site[static_cast<std::size_t>(a)], spec.J[static_cast<std::size_t>(r - 1)],
                          site[static_cast<std::size_t>(b)], spec.J[static_cast<std::size_t>(r2 - 1)]))
      return false;
  }
  return true;
}

namespace detail {

// Runs fn on every injective assignment of q values from [1..n] (ordered).
template <class Fn>
void for_each_injective(int n, int q, Fn&& fn) {
  std::vector<int> vals(static_cast<std::size_t>(q), 0);
  std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
  auto rec = [&](auto&& self, int u) -> void {
    if (u == q) {
      fn(vals);
      return;
    }
    for (int v = 1; v <= n; ++v) {
      if (used[static_cast<std::size_t>(v)]) continue;
      used[static_cast<std::size_t>(v)] = 1;
      vals[static_cast<std::size_t>(u)] = v;
      self(self, u + 1);
      used[static_cast<std::size_t>(v)] = 0;
    }
  };
  rec(rec, 0);
}

// x / base^{p/2} with an exact square root for odd p. Zero numerators short
// circuit, so odd-length vanishing sums stay exact in rational mode.
template <ScalarType S>
S divide_by_half_power(const S& x, const S& base, int p, const std::string& what) {
  const S zero = scalar_ops<S>::from_int(0);
  if (x == zero) return x;
  S denom = pow_nonneg(base, static_cast<unsigned>(p / 2));
  if (p % 2 != 0) {
    try {
      denom *= scalar_sqrt(base);
    } catch (const std::domain_error&) {
      throw InexactResultError(what + ": odd length needs an exact square root of " +
                               scalar_ops<S>::str(base) + "; use float mode or a perfect-square value");
    }
  }
  if (denom == zero) throw std::domain_error(what + ": degenerate normalization");
  return x / denom;
}

}  // namespace detail

// ====== rho_n ======

// (1/n^{p/2}) sum over index tuples with ker(i) = pi of the epsilon moment
// of the expanded word on the flat grid. The law must be normalized
// (mean 0, variance 1); with it, each term is the admissibility indicator
// of the expanded word's letter pairing.
template <ScalarType S>
S rho_n(const PairPartition& pi, const WordSpec& spec, const GridGraph& g, const ScalarLawT<S>& law,
        const Budget& budget = Budget()) {
  spec.validate();
  if (spec.L != g.layers()) throw std::domain_error("rho_n: layer counts differ");
  int p = spec.length();
  if (pi.size() != p) throw std::domain_error("rho_n: partition and word lengths differ");
  if (!law.normalized())
    throw std::domain_error(
        "rho_n: law must be normalized (mean 0, variance 1); center and rescale, or use the full "
        "moment which centers internally");
  int n = g.sites();
  int q = pi.block_count();
  const SimpleGraph& flat = g.flat_graph();
  Accumulator<S> acc;
  IndexTuple i(static_cast<std::size_t>(p), 0);
  detail::for_each_injective(n, q, [&](const std::vector<int>& vals) {
    budget.charge();
    for (int u = 0; u < q; ++u) {
      auto [r, s] = pi.pairs()[static_cast<std::size_t>(u)];
      i[static_cast<std::size_t>(r - 1)] = vals[static_cast<std::size_t>(u)];
      i[static_cast<std::size_t>(s - 1)] = vals[static_cast<std::size_t>(u)];
    }
    acc.add(epsilon_moment(flat, expand_word(i, spec).flat(), law, budget));
  });
  return detail::divide_by_half_power(acc.total(), scalar_ops<S>::from_int(n), p, "rho_n");
}

// Injective density of the decorated intersection graph in the compressed
// grid, computed through the site-product factorization: the (n - p/2)/n
// prefactor times the average over injective block-to-site maps of the two
// block-local conditions. Matches rho_in_graph(..., HomMode::injective) on
// the decorated route.
template <ScalarType S>
S rho_inj_product_formula(const GridGraph& g, const PairPartition& pi, const WordSpec& spec,
                          const Budget& budget = Budget()) {
  spec.validate();
  if (spec.L != g.layers()) throw std::domain_error("product formula: layer counts differ");
  int p = spec.length();
  if (pi.size() != p) throw std::domain_error("product formula: partition and word lengths differ");
  int n = g.sites();
  int q = pi.block_count();
  if (n < q) return scalar_ops<S>::from_int(0);
  Integer count = 0;
  IndexTuple i(static_cast<std::size_t>(p), 0);
  detail::for_each_injective(n, q, [&](const std::vector<int>& vals) {
    budget.charge();
    for (int u = 0; u < q; ++u) {
      auto [r, s] = pi.pairs()[static_cast<std::size_t>(u)];
      i[static_cast<std::size_t>(r - 1)] = vals[static_cast<std::size_t>(u)];
      i[static_cast<std::size_t>(s - 1)] = vals[static_cast<std::size_t>(u)];
    }
    if (grid_word_conditions(g, pi, spec, i)) ++count;
  });
  S nn = scalar_ops<S>::from_int(n);
  S pref = (nn - scalar_ops<S>::from_int(q)) / nn;
  return pref * scalar_ops<S>::from_integer(count) / pow_nonneg(nn, static_cast<unsigned>(q));
}

// ====== grid families ======

// Deterministic, replicable site-graph families g'_n.
enum class GridFamilyKind { complete, edgeless, fixed, blowup };

// A family of site graphs indexed by n, with enough structure to tell when
// the value of a moment term depends on the chosen sites only through their
// classes (complete/edgeless: one class; blow-ups: pattern groups; fixed:
// every site its own class).
class GridFamily {
public:
  static GridFamily complete() { return GridFamily(GridFamilyKind::complete, SimpleGraph(1)); }
  static GridFamily edgeless() { return GridFamily(GridFamilyKind::edgeless, SimpleGraph(1)); }
  static GridFamily fixed(SimpleGraph g) { return GridFamily(GridFamilyKind::fixed, std::move(g)); }
  static GridFamily blowup(SimpleGraph pattern) {
    return GridFamily(GridFamilyKind::blowup, std::move(pattern));
  }

  GridFamilyKind kind() const { return kind_; }
  const SimpleGraph& pattern() const { return pattern_; }

  // Site-exchangeable: term values depend on an index tuple only through
  // its kernel.
  bool exchangeable() const {
    return kind_ == GridFamilyKind::complete || kind_ == GridFamilyKind::edgeless;
  }

  bool supports(long long n) const {
    switch (kind_) {
      case GridFamilyKind::complete:
      case GridFamilyKind::edgeless:
        return n >= 1;
      case GridFamilyKind::fixed:
        return n == pattern_.vertex_count();
      case GridFamilyKind::blowup:
        return n >= 1 && n % pattern_.vertex_count() == 0;
    }
    return false;
  }

  void require_supported(long long n) const {
    if (!supports(n))
      throw std::domain_error("grid family: size " + std::to_string(n) + " not in the family");
  }

  long long class_count(long long n) const {
    require_supported(n);
    switch (kind_) {
      case GridFamilyKind::complete:
      case GridFamilyKind::edgeless:
        return 1;
      case GridFamilyKind::fixed:
        return n;
      case GridFamilyKind::blowup:
        return pattern_.vertex_count();
    }
    return 0;
  }

  long long class_size(long long n) const { return n / class_count(n); }

  // Whether two sites with these (1-based) classes are adjacent; for equal
  // classes, whether two *distinct* same-class sites are adjacent.
  bool class_adjacent(int c1, int c2) const {
    switch (kind_) {
      case GridFamilyKind::complete:
        return true;
      case GridFamilyKind::edgeless:
        return false;
      case GridFamilyKind::fixed:
      case GridFamilyKind::blowup:
        return c1 != c2 && pattern_.has_edge(c1, c2);
    }
    return false;
  }

  SimpleGraph site_graph(int n) const {
    require_supported(n);
    switch (kind_) {
      case GridFamilyKind::complete:
        return SimpleGraph::complete(n);
      case GridFamilyKind::edgeless:
        return SimpleGraph::edgeless(n);
      case GridFamilyKind::fixed:
        return pattern_;
      case GridFamilyKind::blowup:
        return blowup_graph(pattern_, n);
    }
    return SimpleGraph(n);
  }

  // The step graphon the family converges to (and, for blow-ups, realizes
  // exactly at every member).
  template <ScalarType S>
  StepGraphonT<S> limit_graphon() const {
    switch (kind_) {
      case GridFamilyKind::complete:
        return StepGraphonT<S>::constant(scalar_ops<S>::from_int(1));
      case GridFamilyKind::edgeless:
        return StepGraphonT<S>::constant(scalar_ops<S>::from_int(0));
      case GridFamilyKind::blowup:
        return graphon_from_graph<S>(pattern_);
      case GridFamilyKind::fixed:
        break;
    }
    throw std::domain_error("grid family: a single fixed graph has no limit graphon");
  }

  std::string name() const {
    switch (kind_) {
      case GridFamilyKind::complete:
        return "complete";
      case GridFamilyKind::edgeless:
        return "edgeless";
      case GridFamilyKind::fixed:
        return "fixed(" + std::to_string(pattern_.vertex_count()) + ")";
      case GridFamilyKind::blowup:
        return "blowup(" + std::to_string(pattern_.vertex_count()) + ")";
    }
    return "?";
  }

private:
  GridFamily(GridFamilyKind kind, SimpleGraph pattern) : kind_(kind), pattern_(std::move(pattern)) {
    if (pattern_.vertex_count() < 1) throw std::domain_error("grid family: empty pattern");
  }

  GridFamilyKind kind_;
  SimpleGraph pattern_;
};

// ====== moments of normalized sums ======

// Exact moments of S_n^{(J)} words and of the centered product sum S_n on a
// grid family. Index-tuple sums are grouped by kernel partition and block
// class assignment; each group's epsilon moment is evaluated once on a
// representative grid and cached, so repeated n (convergence tables) and
// large n (one class) stay cheap.
template <ScalarType S>
class SnEvaluator {
public:
  SnEvaluator(GridFamily family, SimpleGraph gL, ScalarLawT<S> law)
      : family_(std::move(family)), gL_(std::move(gL)), law_(std::move(law)) {
    if (gL_.vertex_count() < 1 || gL_.vertex_count() > kMaxLayers)
      throw std::domain_error("sum evaluator: layer count out of range");
  }

  const GridFamily& family() const { return family_; }
  const SimpleGraph& layer_graph() const { return gL_; }
  const ScalarLawT<S>& law() const { return law_; }

  // tau((S_n^{(J_1)})^{alpha_1} ...) with the stored law taken as-is.
  S word_moment(const WordSpec& spec, long long n, const Budget& budget = Budget()) const {
    spec.validate();
    if (spec.L != gL_.vertex_count()) throw std::domain_error("sum evaluator: word layer count differs");
    S total = word_sum(spec, law_, 0, n, budget);
    return detail::divide_by_half_power(total, scalar_ops<S>::from_integer(Integer(n)), spec.length(),
                                        "finite moment");
  }

  // tau(((1/sqrt n) sum_k (prod_l a_k^{(l)} - lambda^L))^p) with adjoint
  // marks alpha; centering happens internally by shifting the law (the
  // sigma factors of the normalized-letter expansion cancel exactly, so no
  // square roots enter before the final normalization).
  S full_moment(int p, const AlphaWord& alpha, long long n, Normalization norm = Normalization::raw,
                const Budget& budget = Budget()) const {
    if (p < 1 || p != static_cast<int>(alpha.size()))
      throw std::domain_error("sum evaluator: p/alpha mismatch");
    int L = gL_.vertex_count();
    if (law_.order() < p * L)
      throw std::domain_error("sum evaluator: law moment depth " + std::to_string(law_.order()) +
                              " insufficient, order " + std::to_string(p * L) + " required");
    if (!centered_) centered_.emplace(law_.centered_shift());
    S lambda = law_.mean();
    const S zero = scalar_ops<S>::from_int(0);
    Subset d = full_subset(L);
    std::vector<S> weight(static_cast<std::size_t>(d) + 1, zero);
    for (Subset J = 1; J <= d; ++J)
      weight[J] = pow_nonneg(lambda, static_cast<unsigned>(L - subset_size(J)));
    WordSpec spec;
    spec.L = L;
    spec.J.assign(static_cast<std::size_t>(p), 1);
    spec.alpha = alpha;
    Accumulator<S> acc;
    auto rec = [&](auto&& self, int r, const S& wt) -> void {
      if (r == p) {
        acc.add(wt * word_sum(spec, *centered_, 1, n, budget));
        return;
      }
      for (Subset J = 1; J <= d; ++J) {
        if (weight[J] == zero) continue;
        spec.J[static_cast<std::size_t>(r)] = J;
        self(self, r + 1, wt * weight[J]);
      }
    };
    rec(rec, 0, scalar_ops<S>::from_int(1));
    S result = detail::divide_by_half_power(acc.total(), scalar_ops<S>::from_integer(Integer(n)), p,
                                            "finite moment");
    if (norm == Normalization::raw) return result;
    S c = unit_variance_constant(lambda, law_.variance(), L);
    if (c == zero)
      throw std::domain_error("finite moment: degenerate model (zero variance), cannot normalize");
    return detail::divide_by_half_power(result, c, p, "finite moment variance normalization");
  }

private:
  using CacheKey = std::tuple<int, std::vector<std::pair<int, int>>, IndexTuple>;

  // Unnormalized sum over i in [n]^p of the epsilon moment of the expansion
  // of spec at i, grouped by (ker(i), block classes).
  S word_sum(const WordSpec& spec, const ScalarLawT<S>& law, int law_tag, long long n,
             const Budget& budget) const {
    family_.require_supported(n);
    int p = spec.length();
    bool centered = law.moment(1) == scalar_ops<S>::from_int(0);
    int C = static_cast<int>(family_.class_count(n));
    long long csize = family_.class_size(n);
    Accumulator<S> acc;
    for (const SetPartition& sigma :
         enumerate_partitions(p, centered ? PartitionFilter::min_block_two : PartitionFilter::all)) {
      int q = sigma.block_count();
      if (q > n) continue;
      IndexTuple rep(static_cast<std::size_t>(p), 0);
      for (int r = 1; r <= p; ++r)
        rep[static_cast<std::size_t>(r - 1)] = sigma.block_index_of(r) + 1;
      IndexTuple flat_word = expand_word(rep, spec).flat();
      // Assign a class to each block; the count of site choices is a
      // falling-factorial product per class, and the term value depends
      // only on the induced class adjacency.
      std::vector<int> cls(static_cast<std::size_t>(q), 0);
      std::vector<long long> mult(static_cast<std::size_t>(C) + 1, 0);
      auto rec = [&](auto&& self, int u, const Integer& ways) -> void {
        if (u == q) {
          budget.charge();
          acc.add(scalar_ops<S>::from_integer(ways) * class_term(law, law_tag, flat_word, cls, budget));
          return;
        }
        for (int c = 1; c <= C; ++c) {
          long long& m = mult[static_cast<std::size_t>(c)];
          if (m >= csize) continue;
          cls[static_cast<std::size_t>(u)] = c;
          ++m;
          self(self, u + 1, ways * Integer(csize - (m - 1)));
          --m;
        }
      };
      rec(rec, 0, Integer(1));
    }
    return acc.total();
  }

  // Epsilon moment of the expanded word on a representative grid whose site
  // adjacency is induced by the block classes. Cached: the value depends
  // only on (law, class adjacency, expanded word).
  S class_term(const ScalarLawT<S>& law, int law_tag, const IndexTuple& flat_word,
               const std::vector<int>& cls, const Budget& budget) const {
    int q = static_cast<int>(cls.size());
    std::vector<std::pair<int, int>> edges;
    for (int u = 1; u <= q; ++u)
      for (int v = u + 1; v <= q; ++v)
        if (family_.class_adjacent(cls[static_cast<std::size_t>(u - 1)],
                                   cls[static_cast<std::size_t>(v - 1)]))
          edges.emplace_back(u, v);
    CacheKey key{law_tag, edges, flat_word};
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    SimpleGraph sites(q, edges);
    GridGraph grid = lexicographic_product(sites, gL_);
    S value = epsilon_moment(grid.flat_graph(), flat_word, law, budget);
    cache_.emplace(std::move(key), value);
    return value;
  }

  GridFamily family_;
  SimpleGraph gL_;
  ScalarLawT<S> law_;
  mutable std::optional<ScalarLawT<S>> centered_;
  mutable std::map<CacheKey, S> cache_;
};

// tau((S_n^{(J_1)})^{alpha_1} ...) over a grid family; the law must be
// normalized (the sum variables are built from normalized letters).
template <ScalarType S>
S Sn_product_moment(const GridFamily& family, const SimpleGraph& gL, const ScalarLawT<S>& law,
                    const WordSpec& spec, long long n, const Budget& budget = Budget()) {
  if (!law.normalized())
    throw std::domain_error("Sn_product_moment: law must be normalized (mean 0, variance 1)");
  return SnEvaluator<S>(family, gL, law).word_moment(spec, n, budget);
}

// Brute-force route on one concrete grid: a plain sum over all n^p index
// tuples, no class grouping. Exists as the independent check of the
// family fast path; budget-guarded.
template <ScalarType S>
S Sn_product_moment(const GridGraph& g, const ScalarLawT<S>& law, const WordSpec& spec,
                    const Budget& budget = Budget()) {
  if (!law.normalized())
    throw std::domain_error("Sn_product_moment: law must be normalized (mean 0, variance 1)");
  spec.validate();
  if (spec.L != g.layers()) throw std::domain_error("Sn_product_moment: layer counts differ");
  int p = spec.length();
  int n = g.sites();
  const SimpleGraph& flat = g.flat_graph();
  Accumulator<S> acc;
  IndexTuple i(static_cast<std::size_t>(p), 1);
  while (true) {
    budget.charge();
    acc.add(epsilon_moment(flat, expand_word(i, spec).flat(), law, budget));
    int pos = 0;
    while (pos < p && ++i[static_cast<std::size_t>(pos)] > n) {
      i[static_cast<std::size_t>(pos)] = 1;
      ++pos;
    }
    if (pos == p) break;
  }
  return detail::divide_by_half_power(acc.total(), scalar_ops<S>::from_int(n), p, "finite moment");
}

// Full centered moment over a grid family.
template <ScalarType S>
S Sn_full_moment(const SimpleGraph& gL, const GridFamily& family, const ScalarLawT<S>& law, int p,
                 const AlphaWord& alpha, long long n, Normalization norm = Normalization::raw,
                 const Budget& budget = Budget()) {
  return SnEvaluator<S>(family, gL, law).full_moment(p, alpha, n, norm, budget);
}

// Full centered moment on one explicit site graph.
template <ScalarType S>
S Sn_full_moment(const SimpleGraph& gL, const SimpleGraph& gpn, const ScalarLawT<S>& law, int p,
                 const AlphaWord& alpha, Normalization norm = Normalization::raw,
                 const Budget& budget = Budget()) {
  return SnEvaluator<S>(GridFamily::fixed(gpn), gL, law).full_moment(p, alpha, gpn.vertex_count(),
                                                                     norm, budget);
}

// ====== convergence tables ======

template <ScalarType S>
struct ConvergenceRowT {
  int p;
  long long n;
  S finite;
  S limit;
  S abs_diff;
};

using ConvergenceRow = ConvergenceRowT<Rational>;

// The site law a convergence run uses: the model's explicit moments if
// given (their mean/variance must match lambda/sigma2), else the
// semicircular law with that mean and variance, deep enough for p_max.
template <ScalarType S>
ScalarLawT<S> model_site_law(const LimitModelT<S>& model, int p_max) {
  int order = std::max(2, p_max * model.layers());
  if (model.law_moments) {
    ScalarLawT<S> law(*model.law_moments);
    if (!(law.mean() == model.lambda) || !(law.variance() == model.sigma2))
      throw std::domain_error("model law: moments disagree with lambda/sigma2");
    if (law.order() < order)
      throw std::domain_error("model law: moment depth " + std::to_string(law.order()) +
                              " insufficient, order " + std::to_string(order) + " required");
    return law;
  }
  return ScalarLawT<S>::semicircle(model.lambda, model.sigma2, order);
}

// Rows (p, n, finite, limit, |difference|) for even p up to p_max and each
// n. Both sides use the same normalization; the limit column follows the
// model, the finite column the family. Odd p is omitted: those moments
// vanish in the limit and their finite normalization leaves the rationals.
template <ScalarType S>
std::vector<ConvergenceRowT<S>> convergence_table(const LimitModelT<S>& model, const GridFamily& family,
                                                  int p_max, const std::vector<long long>& ns,
                                                  Normalization norm = Normalization::unit_variance,
                                                  const Budget& budget = Budget()) {
  if (p_max < 2) throw std::domain_error("convergence table: p_max must be >= 2");
  if (ns.empty()) throw std::domain_error("convergence table: need at least one n");
  SnEvaluator<S> eval(family, model.gL, model_site_law(model, p_max));
  std::vector<ConvergenceRowT<S>> rows;
  for (int p = 2; p <= p_max; p += 2) {
    AlphaWord alpha = ones_alpha(p);
    S limit = S_limit_moment(model, p, alpha, norm, LimitRoute::lexicographic, budget);
    for (long long n : ns) {
      S finite = eval.full_moment(p, alpha, n, norm, budget);
      rows.push_back({p, n, finite, limit, scalar_abs<S>(finite - limit)});
    }
  }
  return rows;
}

}  // namespace epsclt
