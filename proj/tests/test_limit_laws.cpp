// Limiting *-moments: the one-layer CLT against pinned constants and a
// brute crossing counter, the lexicographic and decorated-graph routes
// against each other, the two-layer closed-form reference law, and the
// star-family correspondence on the subset compatibility graph.

#include "epsclt/limit_laws.hpp"

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <optional>
#include <vector>

using namespace epsclt;
using testing::Rng;

namespace {

const long long kCatalan[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430};
const long long kDoubleFactorial[] = {1, 1, 3, 15, 105, 945, 10395};

// Independent crossing counter: quadruple scan over the pair list.
int brute_crossings(const std::vector<std::pair<int, int>>& pairs) {
  int c = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (std::size_t j = i + 1; j < pairs.size(); ++j) {
      auto [a, b] = pairs[i];
      auto [x, y] = pairs[j];
      if ((a < x && x < b && b < y) || (x < a && a < y && y < b)) ++c;
    }
  }
  return c;
}

LimitModelT<Rational> tensor_model(const Rational& lambda, const Rational& sigma2) {
  return {SimpleGraph::complete(2), StepGraphonT<Rational>::constant(Rational(0)),
          lambda, sigma2, std::nullopt, 8};
}

Rational unit_moment(const LimitModelT<Rational>& model, int p, LimitRoute route) {
  return S_limit_moment(model, p, ones_alpha(p), Normalization::unit_variance, route);
}

}  // namespace

TEST_CASE("one-layer limit: pinned moment sequences") {
  auto ones = StepGraphonT<Rational>::constant(Rational(1));
  auto zero = StepGraphonT<Rational>::constant(Rational(0));
  for (int p = 2; p <= 12; p += 2) {
    REQUIRE(clt_L1_moment(ones, p) == Rational(kDoubleFactorial[p / 2]));
    REQUIRE(clt_L1_moment(zero, p) == Rational(kCatalan[p / 2]));
    REQUIRE(clt_L1_moment(ones, p - 1) == Rational(0));
  }
  REQUIRE(clt_L1_moment(StepGraphonT<Rational>::constant(Rational(1, 2)), 6) == Rational(71, 8));
  REQUIRE_THROWS_AS(clt_L1_moment(ones, 0), std::domain_error);
}

TEST_CASE("one-layer limit: crossing-count polynomial") {
  // moment_{2p}(q) = sum over pairings of q^(number of crossing pairs),
  // with the exponent recounted by an independent quadruple scan.
  std::vector<Rational> qs = {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4),
                              Rational(1)};
  for (int p = 2; p <= 8; p += 2) {
    for (const Rational& q : qs) {
      Rational want = 0;
      for (const auto& pp : enumerate_pair_partitions(p)) {
        Rational term = 1;
        for (int e = 0; e < brute_crossings(pp.pairs()); ++e) term *= q;
        want += term;
      }
      CAPTURE(p, q.str());
      REQUIRE(clt_L1_moment(StepGraphonT<Rational>::constant(q), p) == want);
    }
  }
  // Degree-six polynomial written out: 5 + 6q + 3q^2 + q^3.
  for (const Rational& q : qs) {
    REQUIRE(clt_L1_moment(StepGraphonT<Rational>::constant(q), 6) ==
            Rational(5) + Rational(6) * q + Rational(3) * q * q + q * q * q);
  }
}

TEST_CASE("variable classification and the variance constant") {
  REQUIRE(classify_sJ(SimpleGraph::complete(2), 0b01) == SJKind::semicircular);
  REQUIRE(classify_sJ(SimpleGraph::complete(2), 0b11) == SJKind::semicircular);
  REQUIRE(classify_sJ(SimpleGraph::edgeless(2), 0b11) == SJKind::circular);
  REQUIRE(classify_sJ(SimpleGraph::edgeless(2), 0b10) == SJKind::semicircular);
  REQUIRE(classify_sJ(SimpleGraph::line(3), 0b011) == SJKind::semicircular);
  REQUIRE(classify_sJ(SimpleGraph::line(3), 0b101) == SJKind::circular);
  REQUIRE(classify_sJ(SimpleGraph::line(3), 0b111) == SJKind::circular);
  REQUIRE_THROWS_AS(classify_sJ(SimpleGraph::complete(2), 0), std::domain_error);
  REQUIRE_THROWS_AS(classify_sJ(SimpleGraph::complete(2), 0b100), std::domain_error);

  REQUIRE(unit_variance_constant(Rational(1), Rational(1), 2) == Rational(3));
  REQUIRE(unit_variance_constant(Rational(0), Rational(1), 3) == Rational(1));
  REQUIRE(unit_variance_constant(Rational(2), Rational(1), 2) == Rational(9));
  REQUIRE(unit_variance_constant(Rational(1), Rational(4), 2) == Rational(24));
  REQUIRE(unit_variance_constant(Rational(1, 2), Rational(3, 4), 1) == Rational(3, 4));
}

TEST_CASE("two tensor layers over free sites: frozen unit-variance moments") {
  struct Row {
    Rational lambda, sigma2, m4, m6, m8;
  };
  // Parameter points (lambda, sigma) = (1,1), (2,1), (1,2), (0,1).
  std::vector<Row> rows = {
      {Rational(1), Rational(1), Rational(20, 9), Rational(59, 9), Rational(1826, 81)},
      {Rational(2), Rational(1), Rational(194, 81), Rational(1919, 243), Rational(203342, 6561)},
      {Rational(1), Rational(4), Rational(37, 18), Rational(193, 36), Rational(5123, 324)},
      {Rational(0), Rational(1), Rational(2), Rational(5), Rational(14)},
  };
  for (const auto& row : rows) {
    CAPTURE(row.lambda.str(), row.sigma2.str());
    LimitModelT<Rational> model = tensor_model(row.lambda, row.sigma2);
    for (LimitRoute route : {LimitRoute::lexicographic, LimitRoute::master}) {
      REQUIRE(unit_moment(model, 2, route) == Rational(1));
      REQUIRE(unit_moment(model, 4, route) == row.m4);
      REQUIRE(unit_moment(model, 6, route) == row.m6);
      REQUIRE(unit_moment(model, 8, route) == row.m8);
      REQUIRE(S_limit_moment(model, 5, ones_alpha(5), Normalization::unit_variance, route) ==
              Rational(0));
    }
    // Closed-form mixture route.
    for (int p = 2; p <= 8; ++p) {
      Rational want = p == 2 ? Rational(1)
                    : p == 4 ? row.m4
                    : p == 6 ? row.m6
                             : row.m8;
      if (p % 2 == 1) want = 0;
      REQUIRE(tensor2_reference_moment(row.lambda, row.sigma2, p, ones_alpha(p)) == want);
    }
  }
}

TEST_CASE("fourth-moment identity of the two-layer mixture") {
  NormalizationParams params = NormalizationParams::from_lambda_sigma(Rational(1), Rational(1));
  REQUIRE(params.delta2 == Rational(3));
  REQUIRE(params.alpha_mix == Rational(2, 3));
  REQUIRE_THROWS_AS(NormalizationParams::from_lambda_sigma(Rational(1), Rational(0)),
                    std::domain_error);

  Rng rng(1441);
  for (int trial = 0; trial < 12; ++trial) {
    Rational lambda = testing::rand_rational(rng, -3, 3, 3);
    Rational sigma2 = testing::rand_rational(rng, 1, 4, 3);
    auto np = NormalizationParamsT<Rational>::from_lambda_sigma(lambda, sigma2);
    Rational m4 = unit_moment(tensor_model(lambda, sigma2), 4, LimitRoute::lexicographic);
    // m4 = 2 + alpha^2 / 2 interpolates the free (2) and classical (5/2)
    // fourth moments.
    REQUIRE(m4 == Rational(2) + np.alpha_mix * np.alpha_mix / Rational(2));
    REQUIRE(tensor2_reference_moment(np, 4, ones_alpha(4)) == m4);
    // Raw second moment is the variance constant, and delta2 matches it.
    Rational raw2 = S_limit_moment(tensor_model(lambda, sigma2), 2, ones_alpha(2),
                                   Normalization::raw, LimitRoute::lexicographic);
    REQUIRE(raw2 == unit_variance_constant(lambda, sigma2, 2));
    REQUIRE(np.delta2 == raw2);
  }
  REQUIRE_THROWS_AS(tensor2_reference_moment(NormalizationParamsT<Rational>{Rational(1), Rational(2)},
                                             4, ones_alpha(4)),
                    std::domain_error);
}

TEST_CASE("single layer through the multi-layer machinery") {
  // L = 1 over a constant graphon: the crossing polynomial again, through
  // both multi-layer routes and the one-layer evaluator.
  for (const Rational& q : {Rational(0), Rational(1, 3), Rational(1)}) {
    LimitModelT<Rational> model{SimpleGraph::complete(1), StepGraphonT<Rational>::constant(q),
                                Rational(0), Rational(1), std::nullopt, 8};
    for (LimitRoute route : {LimitRoute::lexicographic, LimitRoute::master}) {
      REQUIRE(unit_moment(model, 4, route) == Rational(2) + q);
      REQUIRE(unit_moment(model, 6, route) == clt_L1_moment(StepGraphonT<Rational>::constant(q), 6));
    }
  }
}

TEST_CASE("lexicographic and decorated routes agree on random models") {
  Rng rng(987654);
  for (int trial = 0; trial < 14; ++trial) {
    int L = testing::rand_int(rng, 1, 3);
    int p = 2 * testing::rand_int(rng, 1, L == 3 ? 2 : 3);
    SimpleGraph gL = testing::rand_graph(rng, L);
    // Random two-cell step graphon with values in [0,1].
    Rational cut = Rational(testing::rand_int(rng, 1, 3), 4);
    auto val = [&] { return Rational(testing::rand_int(rng, 0, 4), 4); };
    Rational diag = val(), off = val(), corner = val();
    StepGraphonT<Rational> w({Rational(0), cut, Rational(1)}, {{diag, off}, {off, corner}});
    Rational lambda = testing::rand_rational(rng, -2, 2, 2);
    Rational sigma2 = testing::rand_rational(rng, 0, 3, 2);
    LimitModelT<Rational> model{gL, w, lambda, sigma2, std::nullopt, p};
    AlphaWord alpha = testing::rand_alpha(rng, p);
    CAPTURE(trial, L, p, lambda.str(), sigma2.str());
    Rational lex = S_limit_moment(model, p, alpha, Normalization::raw, LimitRoute::lexicographic);
    Rational master = S_limit_moment(model, p, alpha, Normalization::raw, LimitRoute::master);
    REQUIRE(lex == master);

    // Word-level agreement on a random block-constant word.
    WordSpec spec;
    spec.L = L;
    spec.alpha = alpha;
    spec.J.clear();
    for (int r = 0; r < p; ++r)
      spec.J.push_back(static_cast<Subset>(testing::rand_int(rng, 1, static_cast<int>(full_subset(L)))));
    REQUIRE(lex_limit_moment(model, spec) ==
            master_limit_moment(lex_limit_decoration(gL, w), spec));
  }
}

TEST_CASE("adjoint marks do not change moments of the self-adjoint sum") {
  Rng rng(333);
  LimitModelT<Rational> model = tensor_model(Rational(1), Rational(1));
  for (int p : {2, 4, 6}) {
    Rational base = unit_moment(model, p, LimitRoute::lexicographic);
    for (int trial = 0; trial < 4; ++trial) {
      AlphaWord alpha = testing::rand_alpha(rng, p);
      REQUIRE(S_limit_moment(model, p, alpha, Normalization::unit_variance,
                             LimitRoute::lexicographic) == base);
      REQUIRE(tensor2_reference_moment(Rational(1), Rational(1), p, alpha) == base);
    }
  }
}

TEST_CASE("limit words match star families on the compatibility graph") {
  auto star_tables = [](const SimpleGraph& gL) {
    std::vector<PairCumulantTable<Rational>> vars;
    for (Subset J : nonempty_subsets(gL.vertex_count()))
      vars.push_back(classify_sJ(gL, J) == SJKind::semicircular
                         ? PairCumulantTable<Rational>::semicircular()
                         : PairCumulantTable<Rational>::circular());
    return vars;
  };

  Rng rng(2468);
  for (const SimpleGraph& gL :
       {SimpleGraph::complete(2), SimpleGraph::edgeless(2), SimpleGraph::line(3)}) {
    int L = gL.vertex_count();
    auto zero = StepGraphonT<Rational>::constant(Rational(0));
    LexLimitEvaluator<Rational> lex(gL, zero);
    SimpleGraph h = h_graph(gL);
    auto vars = star_tables(gL);
    Subset d = full_subset(L);

    // Exhaustive short words, both a fixed and a random adjoint pattern.
    for (int p = 1; p <= 3; ++p) {
      std::vector<int> word(static_cast<std::size_t>(p), 1);
      while (true) {
        WordSpec spec;
        spec.L = L;
        for (int r = 0; r < p; ++r) {
          // The star word indexes h's vertices in canonical subset order.
          spec.J.push_back(nonempty_subsets(L)[static_cast<std::size_t>(
              word[static_cast<std::size_t>(r)] - 1)]);
        }
        for (const AlphaWord& alpha : {ones_alpha(p), testing::rand_alpha(rng, p)}) {
          spec.alpha = alpha;
          REQUIRE(lex.word_moment(spec) == star_joint_moment(h, vars, word, alpha));
        }
        std::size_t pos = 0;
        while (pos < word.size() && ++word[pos] > static_cast<int>(d)) word[pos++] = 1;
        if (pos == word.size()) break;
      }
    }

    // Seeded longer words.
    for (int trial = 0; trial < 60; ++trial) {
      int p = 2 * testing::rand_int(rng, 2, 3);
      std::vector<int> word;
      WordSpec spec;
      spec.L = L;
      spec.alpha = testing::rand_alpha(rng, p);
      for (int r = 0; r < p; ++r) {
        int v = testing::rand_int(rng, 1, static_cast<int>(nonempty_subsets(L).size()));
        word.push_back(v);
        spec.J.push_back(nonempty_subsets(L)[static_cast<std::size_t>(v - 1)]);
      }
      REQUIRE(lex.word_moment(spec) == star_joint_moment(h, vars, word, spec.alpha));
    }
  }
}

TEST_CASE("degenerate models and budgets") {
  LimitModelT<Rational> degenerate{SimpleGraph::complete(2),
                                   StepGraphonT<Rational>::constant(Rational(0)), Rational(0),
                                   Rational(0), std::nullopt, 4};
  REQUIRE_THROWS_AS(S_limit_moment(degenerate, 4, ones_alpha(4)), std::domain_error);
  REQUIRE(S_limit_moment(degenerate, 4, ones_alpha(4), Normalization::raw) == Rational(0));

  REQUIRE_THROWS_AS(clt_L1_moment(StepGraphonT<Rational>::constant(Rational(1, 2)), 12, Budget(100)),
                    BudgetError);
  LimitModelT<Rational> model = tensor_model(Rational(1), Rational(1));
  REQUIRE_THROWS_AS(S_limit_moment(model, 8, ones_alpha(8), Normalization::unit_variance,
                                   LimitRoute::lexicographic, Budget(50)),
                    BudgetError);
  REQUIRE_THROWS_AS(S_limit_moment(model, 3, ones_alpha(4)), std::domain_error);
}
