// Set partitions: canonical form, filtered enumeration counts, kernels,
// refinement iteration, crossings, and the graph-relative noncrossing
// predicate checked against a from-scratch reimplementation.

#include "epsclt/partitions.hpp"

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

using namespace epsclt;
using testing::Rng;

namespace {

// Independent recount of interleaving blocks straight from the "ABAB or
// BABA subsequence" definition.
bool brute_interleave(const std::vector<int>& A, const std::vector<int>& B) {
  for (int a1 : A)
    for (int b1 : B)
      for (int a2 : A)
        for (int b2 : B)
          if (a1 < b1 && b1 < a2 && a2 < b2) return true;
  for (int b1 : B)
    for (int a1 : A)
      for (int b2 : B)
        for (int a2 : A)
          if (b1 < a1 && a1 < b2 && b2 < a2) return true;
  return false;
}

// Independent admissibility check: pi refines the kernel of i, and every
// interleaving block pair sits on distinct adjacent values.
bool brute_admissible(const SetPartition& pi, const IndexTuple& i, const SimpleGraph& g) {
  for (const auto& b : pi.blocks())
    for (std::size_t t = 1; t < b.size(); ++t)
      if (i[static_cast<std::size_t>(b[t] - 1)] != i[static_cast<std::size_t>(b[0] - 1)]) return false;
  for (int a = 0; a < pi.block_count(); ++a) {
    for (int c = a + 1; c < pi.block_count(); ++c) {
      if (!brute_interleave(pi.block(a), pi.block(c))) continue;
      int va = i[static_cast<std::size_t>(pi.block(a)[0] - 1)];
      int vc = i[static_cast<std::size_t>(pi.block(c)[0] - 1)];
      if (va == vc || !g.has_edge(va, vc)) return false;
    }
  }
  return true;
}

const long long kBell[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140};        // partitions of [k]
const long long kCatalan[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430};     // noncrossing partitions
const long long kNoSingleton[] = {1, 0, 1, 1, 4, 11, 41, 162, 715};    // min block size two
const long long kDoubleFactorial[] = {1, 1, 3, 15, 105, 945, 10395};   // (2p-1)!! at index p

}  // namespace

TEST_CASE("canonical form and validation") {
  SetPartition p(5, {{4, 2}, {5, 1}, {3}});
  REQUIRE(p.to_string() == "1,5|2,4|3");
  REQUIRE(p.block_count() == 3);
  REQUIRE(p.block_index_of(4) == 1);
  REQUIRE(p.same_block(1, 5));
  REQUIRE_FALSE(p.same_block(1, 2));

  REQUIRE_THROWS_AS(SetPartition(3, {{1, 2}}), std::domain_error);          // 3 missing
  REQUIRE_THROWS_AS(SetPartition(3, {{1, 2, 3, 3}}), std::domain_error);    // repeat
  REQUIRE_THROWS_AS(SetPartition(3, {{1, 2, 3, 4}}), std::domain_error);    // out of range
  REQUIRE_THROWS_AS(SetPartition(3, {{1, 2, 3}, {}}), std::domain_error);   // empty block
  REQUIRE_THROWS_AS(SetPartition(0, {}), std::domain_error);

  REQUIRE(SetPartition::singletons(4).block_count() == 4);
  REQUIRE(SetPartition::singletons(4).to_string() == "1|2|3|4");
}

TEST_CASE("kernel groups equal values") {
  REQUIRE(kernel({5, 2, 5}) == SetPartition(3, {{1, 3}, {2}}));
  REQUIRE(kernel({7, 7, 3, 7}) == SetPartition(4, {{1, 2, 4}, {3}}));
  REQUIRE(kernel({1, 2, 3}) == SetPartition::singletons(3));
  REQUIRE(kernel({9, 9, 9}) == SetPartition(3, {{1, 2, 3}}));
  REQUIRE_THROWS_AS(kernel({}), std::domain_error);
}

TEST_CASE("enumeration counts match the classical sequences") {
  for (int k = 1; k <= 8; ++k) {
    CAPTURE(k);
    REQUIRE(static_cast<long long>(enumerate_partitions(k).size()) == kBell[k]);
    REQUIRE(static_cast<long long>(enumerate_partitions(k, PartitionFilter::noncrossing).size()) ==
            kCatalan[k]);
    REQUIRE(static_cast<long long>(enumerate_partitions(k, PartitionFilter::min_block_two).size()) ==
            kNoSingleton[k]);
    if (k % 2 == 0) {
      REQUIRE(static_cast<long long>(enumerate_partitions(k, PartitionFilter::pair).size()) ==
              kDoubleFactorial[k / 2]);
      REQUIRE(static_cast<long long>(
                  enumerate_partitions(k, PartitionFilter::noncrossing_pair).size()) ==
              kCatalan[k / 2]);
    } else {
      // Pair filters on odd ground sets yield an empty list, not an error.
      REQUIRE(enumerate_partitions(k, PartitionFilter::pair).empty());
      REQUIRE(enumerate_partitions(k, PartitionFilter::noncrossing_pair).empty());
    }
  }
  REQUIRE_THROWS_AS(enumerate_partitions(0), std::domain_error);
}

TEST_CASE("enumeration is duplicate-free and filters are genuine subsets") {
  for (int k = 1; k <= 6; ++k) {
    auto all = enumerate_partitions(k);
    std::set<SetPartition> seen(all.begin(), all.end());
    REQUIRE(seen.size() == all.size());

    // Each filtered list equals the corresponding subset of the full list.
    auto expect = [&](PartitionFilter f, auto&& pred) {
      std::vector<SetPartition> want;
      for (const auto& p : all)
        if (pred(p)) want.push_back(p);
      auto got = enumerate_partitions(k, f);
      std::sort(want.begin(), want.end());
      std::sort(got.begin(), got.end());
      REQUIRE(got == want);
    };
    expect(PartitionFilter::noncrossing, [](const SetPartition& p) { return p.is_noncrossing(); });
    expect(PartitionFilter::min_block_two, [](const SetPartition& p) {
      for (const auto& b : p.blocks())
        if (b.size() < 2) return false;
      return true;
    });
    if (k % 2 == 0) {
      expect(PartitionFilter::pair, [](const SetPartition& p) { return p.is_pair_partition(); });
      expect(PartitionFilter::noncrossing_pair, [](const SetPartition& p) {
        return p.is_pair_partition() && p.is_noncrossing();
      });
    }
  }
}

TEST_CASE("refinement order") {
  SetPartition one_block(4, {{1, 2, 3, 4}});
  for (const auto& p : enumerate_partitions(4)) {
    REQUIRE(p.refines(one_block));
    REQUIRE(SetPartition::singletons(4).refines(p));
    REQUIRE(p.refines(p));
  }
  REQUIRE(SetPartition(4, {{1, 2}, {3}, {4}}).refines(SetPartition(4, {{1, 2, 3}, {4}})));
  REQUIRE_FALSE(SetPartition(4, {{1, 3}, {2}, {4}}).refines(SetPartition(4, {{1, 2}, {3, 4}})));
  REQUIRE_THROWS_AS(SetPartition::singletons(3).refines(one_block), std::domain_error);
}

TEST_CASE("crossing block pairs: pinned examples") {
  REQUIRE(SetPartition(4, {{1, 3}, {2, 4}}).crossing_block_pairs() ==
          std::vector<std::pair<int, int>>{{0, 1}});
  REQUIRE(SetPartition(4, {{1, 2}, {3, 4}}).crossing_count() == 0);
  REQUIRE(SetPartition(4, {{1, 4}, {2, 3}}).crossing_count() == 0);
  REQUIRE(SetPartition(6, {{1, 3, 5}, {2, 4, 6}}).crossing_block_pairs() ==
          std::vector<std::pair<int, int>>{{0, 1}});
  REQUIRE(SetPartition(6, {{1, 4}, {2, 5}, {3, 6}}).crossing_count() == 3);
  REQUIRE(SetPartition(6, {{1, 6}, {2, 4}, {3, 5}}).crossing_block_pairs() ==
          std::vector<std::pair<int, int>>{{1, 2}});
  REQUIRE(SetPartition(4, {{1, 3}, {2, 4}}).is_noncrossing() == false);
  REQUIRE(SetPartition(4, {{1, 4}, {2, 3}}).is_noncrossing() == true);
}

TEST_CASE("crossing block pairs agree with the quadruple-scan definition") {
  for (int k = 1; k <= 7; ++k) {
    for (const auto& p : enumerate_partitions(k)) {
      std::vector<std::pair<int, int>> brute;
      for (int a = 0; a < p.block_count(); ++a)
        for (int b = a + 1; b < p.block_count(); ++b)
          if (brute_interleave(p.block(a), p.block(b))) brute.emplace_back(a, b);
      REQUIRE(p.crossing_block_pairs() == brute);
    }
  }
}

TEST_CASE("pair partitions") {
  PairPartition pp(4, {{2, 4}, {1, 3}});
  REQUIRE(pp.pairs() == std::vector<std::pair<int, int>>{{1, 3}, {2, 4}});
  REQUIRE(pp.crossing_count() == 1);
  REQUIRE_THROWS_AS(PairPartition(SetPartition(3, {{1, 2, 3}})), std::domain_error);

  for (int p = 2; p <= 10; p += 2) {
    auto table = pair_partition_table(p);
    auto listed = enumerate_pair_partitions(p);
    REQUIRE(table.size() == listed.size());
    REQUIRE(static_cast<long long>(listed.size()) == kDoubleFactorial[p / 2]);
    for (std::size_t t = 0; t < listed.size(); ++t) {
      REQUIRE(table[t].pairs == listed[t].pairs());
      REQUIRE(table[t].crossing_pairs == listed[t].crossing_block_pairs());
    }
    auto nc = enumerate_pair_partitions(p, true);
    REQUIRE(static_cast<long long>(nc.size()) == kCatalan[p / 2]);
    for (const auto& q : nc) REQUIRE(q.is_noncrossing());
  }
  REQUIRE(pair_partition_table(0).empty());
  REQUIRE(pair_partition_table(3).empty());
}

TEST_CASE("refinement iterator yields exactly the filtered refinements") {
  auto drain = [](RefinementIterator it) {
    std::vector<SetPartition> out;
    while (auto p = it.next()) out.push_back(*p);
    std::sort(out.begin(), out.end());
    return out;
  };

  for (int k = 1; k <= 6; ++k) {
    SetPartition full(k, {[&] {
      std::vector<int> b;
      for (int x = 1; x <= k; ++x) b.push_back(x);
      return b;
    }()});
    REQUIRE(static_cast<long long>(drain(RefinementIterator(full, 1)).size()) == kBell[k]);
    REQUIRE(static_cast<long long>(drain(RefinementIterator(full, 2)).size()) == kNoSingleton[k]);
    if (k % 2 == 0)
      REQUIRE(static_cast<long long>(drain(RefinementIterator(full, 2, true)).size()) ==
              kDoubleFactorial[k / 2]);
    else
      REQUIRE(drain(RefinementIterator(full, 2, true)).empty());
  }

  // Composite base partition: refinements multiply across blocks, and the
  // iterator matches brute filtering of the full enumeration.
  Rng rng(20240817);
  for (int trial = 0; trial < 40; ++trial) {
    int k = testing::rand_int(rng, 2, 7);
    SetPartition rho = testing::rand_partition(rng, k);
    for (int mode = 0; mode < 3; ++mode) {
      int min_size = mode == 0 ? 1 : 2;
      bool pairs_only = mode == 2;
      std::vector<SetPartition> want;
      for (const auto& p : enumerate_partitions(k)) {
        if (!p.refines(rho)) continue;
        bool ok = true;
        for (const auto& b : p.blocks()) {
          if (pairs_only ? b.size() != 2 : static_cast<int>(b.size()) < min_size) ok = false;
        }
        if (ok) want.push_back(p);
      }
      std::sort(want.begin(), want.end());
      REQUIRE(drain(RefinementIterator(rho, min_size, pairs_only)) == want);
    }
  }
}

TEST_CASE("graph-relative noncrossing predicate matches brute admissibility") {
  // Exhaustive: every partition of [k], every tuple over three vertices,
  // every graph on three vertices.
  auto graphs3 = testing::all_graphs(3);
  for (int k = 1; k <= 4; ++k) {
    auto parts = enumerate_partitions(k);
    IndexTuple i(static_cast<std::size_t>(k), 1);
    while (true) {
      for (const auto& g : graphs3)
        for (const auto& p : parts)
          REQUIRE(is_gn_noncrossing(p, i, g) == brute_admissible(p, i, g));
      std::size_t pos = 0;
      while (pos < i.size() && ++i[pos] > 3) i[pos++] = 1;
      if (pos == i.size()) break;
    }
  }

  // Seeded random sweep at larger sizes.
  Rng rng(911);
  for (int trial = 0; trial < 120; ++trial) {
    int k = testing::rand_int(rng, 2, 7);
    int n = testing::rand_int(rng, 2, 5);
    SimpleGraph g = testing::rand_graph(rng, n);
    IndexTuple i;
    for (int r = 0; r < k; ++r) i.push_back(testing::rand_int(rng, 1, n));
    for (const auto& p : enumerate_partitions(k))
      REQUIRE(is_gn_noncrossing(p, i, g) == brute_admissible(p, i, g));
  }

  REQUIRE_THROWS_AS(is_gn_noncrossing(SetPartition::singletons(3), {1, 2}, SimpleGraph(2)),
                    std::domain_error);
}

TEST_CASE("complete and edgeless graphs specialize the predicate") {
  // On a complete graph the predicate only rules out equal values in
  // interleaving blocks; on an edgeless graph every interleaving pair is
  // forbidden, leaving the classical noncrossing refinements.
  SimpleGraph complete = SimpleGraph::complete(4);
  SimpleGraph edgeless = SimpleGraph::edgeless(4);
  IndexTuple i = {1, 2, 1, 2, 3, 3};
  for (const auto& p : enumerate_partitions(6)) {
    bool below_kernel = p.refines(kernel(i));
    bool expect_edgeless = below_kernel && p.is_noncrossing();
    REQUIRE(is_gn_noncrossing(p, i, edgeless) == expect_edgeless);
    if (below_kernel) {
      // Distinctness is automatic below the kernel of this tuple, so the
      // complete graph accepts everything below the kernel.
      REQUIRE(is_gn_noncrossing(p, i, complete));
    }
  }
}

TEST_CASE("intersection graph of a pair partition") {
  REQUIRE(intersection_graph(PairPartition(4, {{1, 3}, {2, 4}})) == SimpleGraph::complete(2));
  REQUIRE(intersection_graph(PairPartition(4, {{1, 4}, {2, 3}})) == SimpleGraph::edgeless(2));
  REQUIRE(intersection_graph(PairPartition(6, {{1, 4}, {2, 5}, {3, 6}})) == SimpleGraph::complete(3));
  SimpleGraph expected(3);
  expected.add_edge(2, 3);
  REQUIRE(intersection_graph(PairPartition(6, {{1, 6}, {2, 4}, {3, 5}})) == expected);
}
