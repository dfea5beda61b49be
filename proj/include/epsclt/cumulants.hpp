#pragma once

// Scalar laws given by moment sequences, free moment-cumulant conversion,
// the epsilon-independence mixed-moment engine (sum over graph-admissible
// partitions of free-cumulant products), and joint moments of abstract
// semicircular/circular star families.

#include "epsclt/partitions.hpp"
#include "epsclt/scalar.hpp"
#include "epsclt/subsets.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace epsclt {

namespace detail {

// Sum over ordered s-tuples (t_1..t_s), t_i >= 0, sum t_i = t, of products
// m_{t_1} ... m_{t_s}; mm[j] = m_j with mm[0] = 1. The coefficient of the
// s-block term in the noncrossing first-block recursion.
template <ScalarType S>
S composition_sum(const std::vector<S>& mm, int s, int t) {
  std::vector<S> row(static_cast<std::size_t>(t) + 1, scalar_ops<S>::from_int(0));
  row[0] = scalar_ops<S>::from_int(1);
  for (int step = 0; step < s; ++step) {
    std::vector<S> next(static_cast<std::size_t>(t) + 1, scalar_ops<S>::from_int(0));
    for (int tt = 0; tt <= t; ++tt) {
      Accumulator<S> acc;
      for (int j = 0; j <= tt; ++j) acc.add(mm[static_cast<std::size_t>(j)] * row[static_cast<std::size_t>(tt - j)]);
      next[static_cast<std::size_t>(tt)] = acc.total();
    }
    row = std::move(next);
  }
  return row[static_cast<std::size_t>(t)];
}

}  // namespace detail

// m (1-based semantics, m[t-1] = m_t) -> free cumulants kappa_1..kappa_K.
// Inverts m_n = sum_{pi in NC(n)} prod kappa_{|block|} through the
// first-block recursion m_n = sum_s kappa_s * [z^{n-s}] M(z)^s.
template <ScalarType S>
std::vector<S> moments_to_free_cumulants(const std::vector<S>& m) {
  int K = static_cast<int>(m.size());
  std::vector<S> mm(static_cast<std::size_t>(K) + 1, scalar_ops<S>::from_int(1));
  for (int t = 1; t <= K; ++t) mm[static_cast<std::size_t>(t)] = m[static_cast<std::size_t>(t - 1)];
  std::vector<S> kappa(static_cast<std::size_t>(K), scalar_ops<S>::from_int(0));
  for (int n = 1; n <= K; ++n) {
    S rest = scalar_ops<S>::from_int(0);
    for (int s = 1; s < n; ++s)
      rest += kappa[static_cast<std::size_t>(s - 1)] * detail::composition_sum(mm, s, n - s);
    kappa[static_cast<std::size_t>(n - 1)] = mm[static_cast<std::size_t>(n)] - rest;
  }
  return kappa;
}

template <ScalarType S>
std::vector<S> free_cumulants_to_moments(const std::vector<S>& kappa) {
  int K = static_cast<int>(kappa.size());
  std::vector<S> mm(static_cast<std::size_t>(K) + 1, scalar_ops<S>::from_int(1));
  for (int n = 1; n <= K; ++n) {
    Accumulator<S> acc;
    for (int s = 1; s <= n; ++s)
      acc.add(kappa[static_cast<std::size_t>(s - 1)] * detail::composition_sum(mm, s, n - s));
    mm[static_cast<std::size_t>(n)] = acc.total();
  }
  return std::vector<S>(mm.begin() + 1, mm.end());
}

// A compactly supported law known through m_1..m_K; free cumulants are
// derived eagerly.
template <ScalarType S>
class ScalarLawT {
public:
  explicit ScalarLawT(std::vector<S> moments)
      : m_(std::move(moments)), kappa_(moments_to_free_cumulants(m_)) {
    if (m_.empty()) throw std::domain_error("law: need at least the first moment");
  }

  // Semicircular law with the given mean and variance, moments up to
  // `order`: m_t = sum_j binom(t,j) mean^{t-j} var^{j/2} Cat_{j/2}.
  static ScalarLawT semicircle(const S& mean, const S& variance, int order) {
    if (order < 1) throw std::domain_error("law: order must be >= 1");
    std::vector<S> zm(static_cast<std::size_t>(order) + 1, scalar_ops<S>::from_int(0));
    zm[0] = scalar_ops<S>::from_int(1);
    for (int t = 2; t <= order; t += 2)
      zm[static_cast<std::size_t>(t)] =
          pow_nonneg(variance, static_cast<unsigned>(t / 2)) *
          scalar_ops<S>::from_integer(catalan_number(static_cast<unsigned>(t / 2)));
    std::vector<S> m(static_cast<std::size_t>(order), scalar_ops<S>::from_int(0));
    for (int t = 1; t <= order; ++t) {
      Accumulator<S> acc;
      for (int j = 0; j <= t; ++j)
        acc.add(scalar_ops<S>::from_integer(binomial(static_cast<unsigned>(t), static_cast<unsigned>(j))) *
                pow_nonneg(mean, static_cast<unsigned>(t - j)) * zm[static_cast<std::size_t>(j)]);
      m[static_cast<std::size_t>(t - 1)] = acc.total();
    }
    return ScalarLawT(std::move(m));
  }

  int order() const { return static_cast<int>(m_.size()); }

  const S& moment(int t) const {
    check_order(t);
    return m_[static_cast<std::size_t>(t - 1)];
  }

  const S& free_cumulant(int t) const {
    check_order(t);
    return kappa_[static_cast<std::size_t>(t - 1)];
  }

  const std::vector<S>& moments() const { return m_; }
  const std::vector<S>& free_cumulants() const { return kappa_; }

  S mean() const { return m_[0]; }
  S variance() const {
    check_order(2);
    return m_[1] - m_[0] * m_[0];
  }
  bool centered() const { return m_[0] == scalar_ops<S>::from_int(0); }
  bool normalized() const {
    return order() >= 2 && centered() && m_[1] == scalar_ops<S>::from_int(1);
  }

  // Law of (a - mean): binomial shift of the moment sequence.
  ScalarLawT centered_shift() const {
    S lam = mean();
    std::vector<S> out(m_.size(), scalar_ops<S>::from_int(0));
    for (int t = 1; t <= order(); ++t) {
      Accumulator<S> acc;
      for (int j = 0; j <= t; ++j) {
        S mj = (j == 0) ? scalar_ops<S>::from_int(1) : m_[static_cast<std::size_t>(j - 1)];
        S sign_pow = pow_nonneg(S(-lam), static_cast<unsigned>(t - j));
        acc.add(scalar_ops<S>::from_integer(binomial(static_cast<unsigned>(t), static_cast<unsigned>(j))) *
                sign_pow * mj);
      }
      out[static_cast<std::size_t>(t - 1)] = acc.total();
    }
    return ScalarLawT(std::move(out));
  }

private:
  void check_order(int t) const {
    if (t < 1 || t > order())
      throw std::domain_error("law: moment depth " + std::to_string(order()) +
                              " insufficient, order " + std::to_string(t) + " required");
  }

  std::vector<S> m_;
  std::vector<S> kappa_;
};

using ScalarLaw = ScalarLawT<Rational>;

// ====== epsilon-independence mixed moments ======

// tau(a_{i_1} ... a_{i_k}) for variables indexed by the vertices of g,
// adjacent vertices classically independent, non-adjacent free. Sums
// free-cumulant products over partitions sigma <= ker(i) admissible for
// (i, g): interleaving blocks must sit on adjacent vertices. When every
// involved law is centered only blocks of size >= 2 can contribute.
// law_of(v) returns the law at vertex v (1-based).
template <ScalarType S, class LawOf>
S epsilon_moment_impl(const SimpleGraph& g, const IndexTuple& i, LawOf&& law_of, const Budget& budget) {
  if (i.empty()) throw std::domain_error("epsilon moment: empty word");
  for (int v : i)
    if (v < 1 || v > g.vertex_count()) throw std::domain_error("epsilon moment: index out of range");
  SetPartition ker = kernel(i);
  int need = 0;
  for (const auto& b : ker.blocks()) need = std::max(need, static_cast<int>(b.size()));
  const S zero = scalar_ops<S>::from_int(0);
  bool centered = true;
  for (const auto& b : ker.blocks()) {
    const ScalarLawT<S>& law = law_of(i[static_cast<std::size_t>(b.front() - 1)]);
    if (law.order() < need)
      throw std::domain_error("epsilon moment: law moment depth " + std::to_string(law.order()) +
                              " insufficient, order " + std::to_string(need) + " required");
    if (!(law.free_cumulant(1) == zero)) centered = false;
  }
  // When every involved law has cumulants supported on {2}, any refinement
  // with a block of size != 2 contributes a zero factor and can be skipped
  // wholesale.
  bool pair_support = centered;
  for (const auto& b : ker.blocks()) {
    if (!pair_support) break;
    const ScalarLawT<S>& law = law_of(i[static_cast<std::size_t>(b.front() - 1)]);
    for (int t = 3; t <= need; ++t) {
      if (!(law.free_cumulant(t) == zero)) {
        pair_support = false;
        break;
      }
    }
  }
  Accumulator<S> acc;
  RefinementIterator it(ker, centered ? 2 : 1, pair_support);
  while (auto sigma = it.next()) {
    budget.charge();
    if (!is_gn_noncrossing(*sigma, i, g)) continue;
    S prod = scalar_ops<S>::from_int(1);
    for (const auto& b : sigma->blocks()) {
      const ScalarLawT<S>& law = law_of(i[static_cast<std::size_t>(b.front() - 1)]);
      prod *= law.free_cumulant(static_cast<int>(b.size()));
      if (prod == zero) break;
    }
    acc.add(prod);
  }
  return acc.total();
}

// All vertices share one law.
template <ScalarType S>
S epsilon_moment(const SimpleGraph& g, const IndexTuple& i, const ScalarLawT<S>& law,
                 const Budget& budget = Budget()) {
  return epsilon_moment_impl<S>(g, i, [&](int) -> const ScalarLawT<S>& { return law; }, budget);
}

// One law per vertex.
template <ScalarType S>
S epsilon_moment(const SimpleGraph& g, const IndexTuple& i, const std::vector<ScalarLawT<S>>& laws,
                 const Budget& budget = Budget()) {
  if (static_cast<int>(laws.size()) != g.vertex_count())
    throw std::domain_error("epsilon moment: need one law per vertex");
  return epsilon_moment_impl<S>(
      g, i, [&](int v) -> const ScalarLawT<S>& { return laws[static_cast<std::size_t>(v - 1)]; }, budget);
}

// ====== star families ======

// Pair cumulants kappa_2(x^a, x^b) of a centered variable whose higher free
// cumulants vanish. Semicircular: all one. Circular: 1 iff the adjoint
// marks differ.
template <ScalarType S>
struct PairCumulantTable {
  S vals[2][2];

  static PairCumulantTable semicircular() {
    PairCumulantTable t;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) t.vals[a][b] = scalar_ops<S>::from_int(1);
    return t;
  }

  static PairCumulantTable circular() {
    PairCumulantTable t;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) t.vals[a][b] = scalar_ops<S>::from_int(a == b ? 0 : 1);
    return t;
  }

  const S& at(Star a, Star b) const {
    return vals[static_cast<int>(a)][static_cast<int>(b)];
  }
};

// Joint *-moments of centered variables x_1..x_m (one per vertex of h)
// whose mixed cumulants follow the graph-admissible pair-partition rule:
//   tau(x_{w_1}^{a_1} ... x_{w_p}^{a_p}) =
//     sum over pair partitions pi <= ker(w), admissible for (w, h),
//     of prod over blocks {r,s} of kappa_2(x^{a_r}, x^{a_s}).
template <ScalarType S>
class StarFamilyEvaluator {
public:
  StarFamilyEvaluator(SimpleGraph h, std::vector<PairCumulantTable<S>> vars)
      : h_(std::move(h)), vars_(std::move(vars)) {
    if (static_cast<int>(vars_.size()) != h_.vertex_count())
      throw std::domain_error("star family: need one cumulant table per vertex");
  }

  const SimpleGraph& graph() const { return h_; }

  // word: 1-based h-vertices. Odd lengths vanish.
  S word_moment(const std::vector<int>& word, const AlphaWord& alpha, const Budget& budget = Budget()) const {
    int p = static_cast<int>(word.size());
    if (p == 0 || p != static_cast<int>(alpha.size()))
      throw std::domain_error("star family: word/alpha length mismatch");
    for (int v : word)
      if (v < 1 || v > h_.vertex_count()) throw std::domain_error("star family: vertex out of range");
    const S zero = scalar_ops<S>::from_int(0);
    if (p % 2 != 0) return zero;
    Accumulator<S> acc;
    for (const PairPartitionInfo& info : pair_partition_table(p)) {
      budget.charge();
      bool ok = true;
      for (auto [r, s] : info.pairs) {
        if (word[static_cast<std::size_t>(r - 1)] != word[static_cast<std::size_t>(s - 1)]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      for (auto [a, b] : info.crossing_pairs) {
        int u = word[static_cast<std::size_t>(info.pairs[static_cast<std::size_t>(a)].first - 1)];
        int v = word[static_cast<std::size_t>(info.pairs[static_cast<std::size_t>(b)].first - 1)];
        if (u == v || !h_.has_edge(u, v)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      S prod = scalar_ops<S>::from_int(1);
      for (auto [r, s] : info.pairs) {
        int u = word[static_cast<std::size_t>(r - 1)];
        prod *= vars_[static_cast<std::size_t>(u - 1)].at(alpha[static_cast<std::size_t>(r - 1)],
                                                          alpha[static_cast<std::size_t>(s - 1)]);
        if (prod == zero) break;
      }
      acc.add(prod);
    }
    return acc.total();
  }

  // Moment of sum_v c_v x_v where weights_sq[v-1] = c_v^2: expands into
  // words; only words using every vertex an even number of times survive,
  // so only the squares of the coefficients are ever needed.
  S mixture_moment(const std::vector<S>& weights_sq, int p, const AlphaWord& alpha,
                   const Budget& budget = Budget()) const {
    if (static_cast<int>(weights_sq.size()) != h_.vertex_count())
      throw std::domain_error("star family: need one weight per vertex");
    if (p < 1 || p != static_cast<int>(alpha.size()))
      throw std::domain_error("star family: p/alpha mismatch");
    const S zero = scalar_ops<S>::from_int(0);
    if (p % 2 != 0) return zero;
    int m = h_.vertex_count();
    std::vector<int> word(static_cast<std::size_t>(p), 0);
    std::vector<int> count(static_cast<std::size_t>(m) + 1, 0);
    Accumulator<S> acc;
    auto rec = [&](auto&& self, int pos, int odd) -> void {
      if (p - pos < odd) return;  // parity can no longer balance
      if (pos == p) {
        budget.charge();
        S weight = scalar_ops<S>::from_int(1);
        for (int v = 1; v <= m; ++v)
          if (count[static_cast<std::size_t>(v)] > 0)
            weight *= pow_nonneg(weights_sq[static_cast<std::size_t>(v - 1)],
                                 static_cast<unsigned>(count[static_cast<std::size_t>(v)] / 2));
        if (!(weight == zero)) acc.add(weight * word_moment(word, alpha, budget));
        return;
      }
      for (int v = 1; v <= m; ++v) {
        word[static_cast<std::size_t>(pos)] = v;
        int& c = count[static_cast<std::size_t>(v)];
        ++c;
        self(self, pos + 1, odd + (c % 2 == 1 ? 1 : -1));
        --c;
      }
    };
    rec(rec, 0, 0);
    return acc.total();
  }

private:
  SimpleGraph h_;
  std::vector<PairCumulantTable<S>> vars_;
};

template <ScalarType S>
S star_joint_moment(const SimpleGraph& h, const std::vector<PairCumulantTable<S>>& vars,
                    const std::vector<int>& word, const AlphaWord& alpha, const Budget& budget = Budget()) {
  return StarFamilyEvaluator<S>(h, vars).word_moment(word, alpha, budget);
}

}  // namespace epsclt
