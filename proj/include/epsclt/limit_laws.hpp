#pragma once

// Limiting *-moments: the one-layer CLT (pair partitions weighted by
// homomorphism densities), the master formula over decorated intersection
// graphs, its lexicographic specialization with explicit admissibility
// conditions, classification of the limit variables, and the closed-form
// reference law for two tensor layers.

#include "epsclt/cumulants.hpp"
#include "epsclt/decorated.hpp"
#include "epsclt/graphon.hpp"
#include "epsclt/partitions.hpp"
#include "epsclt/scalar.hpp"
#include "epsclt/subsets.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace epsclt {

enum class Normalization { raw, unit_variance };
enum class LimitRoute { lexicographic, master };

// s_J is semicircular iff gL restricted to J is complete, else circular.
enum class SJKind { semicircular, circular };

inline SJKind classify_sJ(const SimpleGraph& gL, Subset J) {
  if (J == 0 || J >= (Subset{1} << gL.vertex_count()))
    throw std::domain_error("classify: subset out of range");
  return gL.is_complete_on(subset_elements(J)) ? SJKind::semicircular : SJKind::circular;
}

// Variance of the raw limit variable S: sum_J sigma^{2|J|} lambda^{2|J^c|}
// over nonempty J, i.e. (sigma2 + lambda^2)^L - lambda^{2L}.
template <ScalarType S>
S unit_variance_constant(const S& lambda, const S& sigma2, int L) {
  if (L < 1 || L > kMaxLayers) throw std::domain_error("variance constant: layer count out of range");
  S lam2 = lambda * lambda;
  return pow_nonneg(S(sigma2 + lam2), static_cast<unsigned>(L)) - pow_nonneg(lam2, static_cast<unsigned>(L));
}

// A lexicographic limit model: layer graph gL, site limit graphon w, and
// the site law's mean / variance.
template <ScalarType S>
struct LimitModelT {
  SimpleGraph gL;
  StepGraphonT<S> w;
  S lambda;
  S sigma2;
  std::optional<std::vector<S>> law_moments;  // site law; defaults to semicircular
  int p_max = 8;

  int layers() const { return gL.vertex_count(); }
};

using LimitModel = LimitModelT<Rational>;

// ====== lexicographic limit formula ======

// Evaluates limiting *-moments of the family (s_J) by summing over pair
// partitions pi <= ker(J) that satisfy, with J_u the block subsets:
//   (1) interleaving blocks u, v: every pair in J_u x J_v with distinct
//       layers is an edge of gL;
//   (2) blocks whose adjoint marks agree: gL restricted to J_u is complete;
// each admissible pi contributes the integral of prod w(x_u, x_v) over the
// interleaving pairs with J_u and J_v sharing a layer.
// Subset admissibility tables are precomputed so large word sweeps stay
// cheap.
template <ScalarType S>
class LexLimitEvaluator {
public:
  LexLimitEvaluator(SimpleGraph gL, StepGraphonT<S> w) : gL_(std::move(gL)), w_(std::move(w)) {
    L_ = gL_.vertex_count();
    if (L_ < 1 || L_ > kMaxLayers) throw std::domain_error("limit evaluator: layer count out of range");
    Subset d = full_subset(L_);
    complete_on_.assign(static_cast<std::size_t>(d) + 1, 0);
    cross_ok_.assign(static_cast<std::size_t>(d) + 1, std::vector<char>(static_cast<std::size_t>(d) + 1, 0));
    for (Subset J = 0; J <= d; ++J)
      complete_on_[J] = gL_.is_complete_on(subset_elements(J)) ? 1 : 0;
    for (Subset J1 = 0; J1 <= d; ++J1) {
      for (Subset J2 = 0; J2 <= d; ++J2) {
        bool ok = true;
        for (int l1 : subset_elements(J1)) {
          for (int l2 : subset_elements(J2)) {
            if (l1 != l2 && !gL_.has_edge(l1, l2)) { ok = false; break; }
          }
          if (!ok) break;
        }
        cross_ok_[J1][J2] = ok ? 1 : 0;
      }
    }
    w_zero_ = w_.is_identically(scalar_ops<S>::from_int(0));
    w_const_ = w_.cell_count() == 1;
  }

  const SimpleGraph& layer_graph() const { return gL_; }
  const StepGraphonT<S>& graphon() const { return w_; }

  // tau(s_{J_1}^{alpha_1} ... s_{J_p}^{alpha_p}).
  S word_moment(const WordSpec& spec, const Budget& budget = Budget()) const {
    spec.validate();
    if (spec.L != L_) throw std::domain_error("limit evaluator: word layer count differs");
    int p = spec.length();
    if (p % 2 != 0) return scalar_ops<S>::from_int(0);
    Accumulator<S> acc;
    std::vector<Subset> Jb;
    std::vector<char> mark_eq;
    for (const PairPartitionInfo& info : pair_partition_table(p)) {
      budget.charge();
      int q = static_cast<int>(info.pairs.size());
      Jb.clear();
      mark_eq.clear();
      bool ok = true;
      for (auto [r, s] : info.pairs) {
        if (spec.J[static_cast<std::size_t>(r - 1)] != spec.J[static_cast<std::size_t>(s - 1)]) {
          ok = false;
          break;
        }
        Jb.push_back(spec.J[static_cast<std::size_t>(r - 1)]);
        mark_eq.push_back(spec.alpha[static_cast<std::size_t>(r - 1)] == spec.alpha[static_cast<std::size_t>(s - 1)] ? 1 : 0);
      }
      if (!ok) continue;
      acc.add(admissible_term(info, q, Jb, mark_eq, budget));
    }
    return acc.total();
  }

  // Raw moment of S = sum over nonempty J of sigma^{|J|} lambda^{|J^c|} s_J:
  // the multinomial word sum reorganized as (pair partition, subset per
  // block), which prunes every word whose kernel pairs mismatched subsets.
  S s_moment_raw(const S& lambda, const S& sigma2, int p, const AlphaWord& alpha,
                 const Budget& budget = Budget()) const {
    if (p < 1 || p != static_cast<int>(alpha.size()))
      throw std::domain_error("limit evaluator: p/alpha mismatch");
    if (p % 2 != 0) return scalar_ops<S>::from_int(0);
    S lam2 = lambda * lambda;
    Subset d = full_subset(L_);
    std::vector<S> wsq(static_cast<std::size_t>(d) + 1, scalar_ops<S>::from_int(0));
    for (Subset J = 1; J <= d; ++J)
      wsq[J] = pow_nonneg(sigma2, static_cast<unsigned>(subset_size(J))) *
               pow_nonneg(lam2, static_cast<unsigned>(L_ - subset_size(J)));
    const S zero = scalar_ops<S>::from_int(0);
    Accumulator<S> acc;
    for (const PairPartitionInfo& info : pair_partition_table(p)) {
      int q = static_cast<int>(info.pairs.size());
      std::vector<char> mark_eq(static_cast<std::size_t>(q));
      for (int u = 0; u < q; ++u) {
        auto [r, s] = info.pairs[static_cast<std::size_t>(u)];
        mark_eq[static_cast<std::size_t>(u)] =
            alpha[static_cast<std::size_t>(r - 1)] == alpha[static_cast<std::size_t>(s - 1)] ? 1 : 0;
      }
      std::vector<Subset> Jb(static_cast<std::size_t>(q), 1);
      // Odometer over subset assignments per block with early weight and
      // completeness pruning.
      auto rec = [&](auto&& self, int u, const S& weight) -> void {
        if (u == q) {
          budget.charge();
          S term = admissible_term(info, q, Jb, mark_eq, budget);
          if (!(term == zero)) acc.add(weight * term);
          return;
        }
        for (Subset J = 1; J <= d; ++J) {
          if (wsq[J] == zero) continue;
          if (mark_eq[static_cast<std::size_t>(u)] && !complete_on_[J]) continue;
          Jb[static_cast<std::size_t>(u)] = J;
          self(self, u + 1, weight * wsq[J]);
        }
      };
      rec(rec, 0, scalar_ops<S>::from_int(1));
    }
    return acc.total();
  }

private:
  // Contribution of one pair partition once subsets are fixed per block.
  S admissible_term(const PairPartitionInfo& info, int q, const std::vector<Subset>& Jb,
                    const std::vector<char>& mark_eq, const Budget& budget) const {
    const S zero = scalar_ops<S>::from_int(0);
    const S one = scalar_ops<S>::from_int(1);
    for (int u = 0; u < q; ++u)
      if (mark_eq[static_cast<std::size_t>(u)] && !complete_on_[Jb[static_cast<std::size_t>(u)]]) return zero;
    // Interleaving pairs must be cross-admissible; overlapping subsets pick
    // up a w factor between their block variables.
    std::vector<std::pair<int, int>> w_edges;
    for (auto [a, b] : info.crossing_pairs) {
      Subset Ja = Jb[static_cast<std::size_t>(a)], Jc = Jb[static_cast<std::size_t>(b)];
      if (!cross_ok_[Ja][Jc]) return zero;
      if ((Ja & Jc) != 0) w_edges.emplace_back(a, b);
    }
    if (w_edges.empty()) return one;
    if (w_zero_) return zero;
    if (w_const_) return pow_nonneg(w_.value(0, 0), static_cast<unsigned>(w_edges.size()));
    // Integrate the w product over the blocks touched by w_edges.
    std::vector<int> involved;
    std::vector<int> slot(static_cast<std::size_t>(q), -1);
    for (auto [a, b] : w_edges) {
      if (slot[static_cast<std::size_t>(a)] < 0) {
        slot[static_cast<std::size_t>(a)] = static_cast<int>(involved.size());
        involved.push_back(a);
      }
      if (slot[static_cast<std::size_t>(b)] < 0) {
        slot[static_cast<std::size_t>(b)] = static_cast<int>(involved.size());
        involved.push_back(b);
      }
    }
    int m = w_.cell_count();
    int nv = static_cast<int>(involved.size());
    std::vector<int> cell(static_cast<std::size_t>(nv), 0);
    Accumulator<S> acc;
    while (true) {
      budget.charge();
      S term = one;
      for (int t = 0; t < nv; ++t) term *= w_.width(cell[static_cast<std::size_t>(t)]);
      for (auto [a, b] : w_edges) {
        if (term == zero) break;
        term *= w_.value(cell[static_cast<std::size_t>(slot[static_cast<std::size_t>(a)])],
                         cell[static_cast<std::size_t>(slot[static_cast<std::size_t>(b)])]);
      }
      acc.add(term);
      int pos = 0;
      while (pos < nv && ++cell[static_cast<std::size_t>(pos)] == m) {
        cell[static_cast<std::size_t>(pos)] = 0;
        ++pos;
      }
      if (pos == nv) break;
    }
    return acc.total();
  }

  SimpleGraph gL_;
  StepGraphonT<S> w_;
  int L_;
  std::vector<char> complete_on_;
  std::vector<std::vector<char>> cross_ok_;
  bool w_zero_;
  bool w_const_;
};

template <ScalarType S>
S lex_limit_moment(const SimpleGraph& gL, const StepGraphonT<S>& w, const WordSpec& spec,
                   const Budget& budget = Budget()) {
  return LexLimitEvaluator<S>(gL, w).word_moment(spec, budget);
}

template <ScalarType S>
S lex_limit_moment(const LimitModelT<S>& model, const WordSpec& spec, const Budget& budget = Budget()) {
  return LexLimitEvaluator<S>(model.gL, model.w).word_moment(spec, budget);
}

// ====== master formula ======

// tau(s_{J_1}^{alpha_1} ... ) = sum over pair partitions pi <= ker(J) of
// rho(F_pi, w) with F_pi the decorated intersection graph. The decoration
// entries of w encode the admissibility conditions, so no pre-filtering
// beyond pi <= ker(J) happens here.
template <ScalarType S>
S master_limit_moment(const DecoratedStepGraphonT<S>& w, const WordSpec& spec,
                      const Budget& budget = Budget()) {
  spec.validate();
  if (spec.L != w.layers()) throw std::domain_error("master formula: layer counts differ");
  int p = spec.length();
  if (p % 2 != 0) return scalar_ops<S>::from_int(0);
  Accumulator<S> acc;
  for (const PairPartitionInfo& info : pair_partition_table(p)) {
    bool ok = true;
    for (auto [r, s] : info.pairs) {
      if (spec.J[static_cast<std::size_t>(r - 1)] != spec.J[static_cast<std::size_t>(s - 1)]) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    PairPartition pi(p, info.pairs);
    acc.add(rho_decorated(decorated_intersection_graph<S>(pi, spec), w, budget));
  }
  return acc.total();
}

// ====== the S variable ======

// Limiting moment of S = sum_J sigma^{|J|} lambda^{|J^c|} s_J, through
// either route. S is self-adjoint, so alpha only matters for testing route
// agreement. unit_variance divides by the variance constant to the p/2.
template <ScalarType S>
S S_limit_moment(const LimitModelT<S>& model, int p, const AlphaWord& alpha,
                 Normalization norm = Normalization::unit_variance,
                 LimitRoute route = LimitRoute::lexicographic, const Budget& budget = Budget()) {
  if (p < 1 || p != static_cast<int>(alpha.size()))
    throw std::domain_error("limit moment: p/alpha mismatch");
  if (p % 2 != 0) return scalar_ops<S>::from_int(0);
  int L = model.layers();
  S raw;
  if (route == LimitRoute::lexicographic) {
    raw = LexLimitEvaluator<S>(model.gL, model.w).s_moment_raw(model.lambda, model.sigma2, p, alpha, budget);
  } else {
    // Expand over (pair partition, subset per block) and evaluate each term
    // with the decorated-graphon formula.
    DecoratedStepGraphonT<S> dec = lex_limit_decoration(model.gL, model.w);
    S lam2 = model.lambda * model.lambda;
    Subset d = full_subset(L);
    std::vector<S> wsq(static_cast<std::size_t>(d) + 1, scalar_ops<S>::from_int(0));
    for (Subset J = 1; J <= d; ++J)
      wsq[J] = pow_nonneg(model.sigma2, static_cast<unsigned>(subset_size(J))) *
               pow_nonneg(lam2, static_cast<unsigned>(L - subset_size(J)));
    const S zero = scalar_ops<S>::from_int(0);
    Accumulator<S> acc;
    WordSpec spec;
    spec.L = L;
    spec.J.assign(static_cast<std::size_t>(p), 1);
    spec.alpha = alpha;
    for (const PairPartitionInfo& info : pair_partition_table(p)) {
      int q = static_cast<int>(info.pairs.size());
      std::vector<Subset> Jb(static_cast<std::size_t>(q), 1);
      auto rec = [&](auto&& self, int u, const S& weight) -> void {
        if (u == q) {
          budget.charge();
          for (int t = 0; t < q; ++t) {
            auto [r, s] = info.pairs[static_cast<std::size_t>(t)];
            spec.J[static_cast<std::size_t>(r - 1)] = Jb[static_cast<std::size_t>(t)];
            spec.J[static_cast<std::size_t>(s - 1)] = Jb[static_cast<std::size_t>(t)];
          }
          PairPartition pi(p, info.pairs);
          acc.add(weight * rho_decorated(decorated_intersection_graph<S>(pi, spec), dec, budget));
          return;
        }
        for (Subset J = 1; J <= d; ++J) {
          if (wsq[J] == zero) continue;
          Jb[static_cast<std::size_t>(u)] = J;
          self(self, u + 1, weight * wsq[J]);
        }
      };
      rec(rec, 0, scalar_ops<S>::from_int(1));
    }
    raw = acc.total();
  }
  if (norm == Normalization::raw) return raw;
  S c = unit_variance_constant(model.lambda, model.sigma2, L);
  if (c == scalar_ops<S>::from_int(0))
    throw std::domain_error("limit moment: degenerate model (zero variance), cannot normalize");
  return raw / pow_nonneg(c, static_cast<unsigned>(p / 2));
}

// ====== one-layer CLT and the two-layer reference law ======

// Even moments of the one-layer limit: sum over pair partitions of the
// plain homomorphism density of the intersection graph. Odd p gives 0.
// Deliberately routed through rho_graphon rather than the multi-layer
// evaluator, so the two implementations can check each other.
template <ScalarType S>
S clt_L1_moment(const StepGraphonT<S>& w, int p, const Budget& budget = Budget()) {
  if (p < 1) throw std::domain_error("one-layer limit: p must be >= 1");
  if (p % 2 != 0) return scalar_ops<S>::from_int(0);
  Accumulator<S> acc;
  for (const PairPartitionInfo& info : pair_partition_table(p)) {
    PairPartition pi(p, info.pairs);
    acc.add(rho_graphon(intersection_graph(pi), w, budget));
  }
  return acc.total();
}

// Mixing parameters of the two-layer reference law: delta2 is the raw
// variance, alpha_mix in [0,1] the classical weight.
template <ScalarType S>
struct NormalizationParamsT {
  S delta2;
  S alpha_mix;

  static NormalizationParamsT from_lambda_sigma(const S& lambda, const S& sigma2) {
    if (sigma2 == scalar_ops<S>::from_int(0))
      throw std::domain_error("normalization params: sigma2 must be positive");
    S lam2 = lambda * lambda;
    S two = scalar_ops<S>::from_int(2);
    return {sigma2 * (sigma2 + two * lam2), two * lam2 / (sigma2 + two * lam2)};
  }
};

using NormalizationParams = NormalizationParamsT<Rational>;

// Two-layer reference law: the unit-variance limit equals
//   sqrt(alpha_mix/2) (s_1 + s_2) + sqrt(1 - alpha_mix) s_3
// with s_1, s_2 classically independent standard semicirculars and s_3
// free of them. Only squared weights enter the expansion.
template <ScalarType S>
S tensor2_reference_moment(const NormalizationParamsT<S>& params, int p, const AlphaWord& alpha,
                           const Budget& budget = Budget()) {
  S zero = scalar_ops<S>::from_int(0);
  S one = scalar_ops<S>::from_int(1);
  S two = scalar_ops<S>::from_int(2);
  if (params.alpha_mix < zero || params.alpha_mix > one)
    throw std::domain_error("reference law: mixing weight must lie in [0,1]");
  SimpleGraph h(3);
  h.add_edge(1, 2);  // the two classically independent components
  std::vector<PairCumulantTable<S>> vars(3, PairCumulantTable<S>::semicircular());
  std::vector<S> weights_sq = {params.alpha_mix / two, params.alpha_mix / two, one - params.alpha_mix};
  return StarFamilyEvaluator<S>(h, vars).mixture_moment(weights_sq, p, alpha, budget);
}

template <ScalarType S>
S tensor2_reference_moment(const S& lambda, const S& sigma2, int p, const AlphaWord& alpha,
                           const Budget& budget = Budget()) {
  return tensor2_reference_moment(NormalizationParamsT<S>::from_lambda_sigma(lambda, sigma2), p,
                                  alpha, budget);
}

}  // namespace epsclt
