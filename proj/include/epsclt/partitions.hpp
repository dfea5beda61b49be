#pragma once

// Set partitions of [k]: canonical encoding, filtered enumeration, kernels
// of index tuples, refinement iteration, crossings, and the graph-relative
// noncrossing predicate that drives every moment formula in this library.

#include "epsclt/graphs.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace epsclt {

// Index tuples i = (i_1..i_k), 1-based vertex labels.
using IndexTuple = std::vector<int>;

// Canonical form: each block ascending, blocks ordered by their minimum.
// Positions are 1-based. Equality is structural.
class SetPartition {
public:
  SetPartition(int k, std::vector<std::vector<int>> blocks) : k_(k) {
    if (k < 1) throw std::domain_error("set partition: ground set must be nonempty");
    std::vector<char> seen(static_cast<std::size_t>(k) + 1, 0);
    for (auto& b : blocks) {
      if (b.empty()) throw std::domain_error("set partition: empty block");
      std::sort(b.begin(), b.end());
      for (int x : b) {
        if (x < 1 || x > k) throw std::domain_error("set partition: element out of range");
        if (seen[static_cast<std::size_t>(x)]) throw std::domain_error("set partition: repeated element");
        seen[static_cast<std::size_t>(x)] = 1;
      }
    }
    for (int x = 1; x <= k; ++x)
      if (!seen[static_cast<std::size_t>(x)]) throw std::domain_error("set partition: element " + std::to_string(x) + " missing");
    std::sort(blocks.begin(), blocks.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) { return a.front() < b.front(); });
    blocks_ = std::move(blocks);
    block_of_.assign(static_cast<std::size_t>(k) + 1, -1);
    for (int bi = 0; bi < static_cast<int>(blocks_.size()); ++bi)
      for (int x : blocks_[bi]) block_of_[static_cast<std::size_t>(x)] = bi;
  }

  static SetPartition singletons(int k) {
    std::vector<std::vector<int>> b;
    for (int x = 1; x <= k; ++x) b.push_back({x});
    return SetPartition(k, std::move(b));
  }

  int size() const { return k_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  const std::vector<int>& block(int bi) const { return blocks_[static_cast<std::size_t>(bi)]; }

  // 0-based index of the block containing position r.
  int block_index_of(int r) const {
    check_pos(r);
    return block_of_[static_cast<std::size_t>(r)];
  }

  bool same_block(int r, int s) const { return block_index_of(r) == block_index_of(s); }

  // this <= coarser in the refinement order.
  bool refines(const SetPartition& coarser) const {
    if (k_ != coarser.k_) throw std::domain_error("refines: ground sets differ");
    for (const auto& b : blocks_) {
      int target = coarser.block_index_of(b.front());
      for (int x : b)
        if (coarser.block_index_of(x) != target) return false;
    }
    return true;
  }

  bool is_pair_partition() const {
    for (const auto& b : blocks_)
      if (b.size() != 2) return false;
    return true;
  }

  bool is_noncrossing() const { return crossing_block_pairs().empty(); }

  // Unordered block pairs that interleave (an ABAB or BABA pattern exists).
  std::vector<std::pair<int, int>> crossing_block_pairs() const {
    std::vector<std::pair<int, int>> out;
    int q = block_count();
    for (int a = 0; a < q; ++a)
      for (int b = a + 1; b < q; ++b)
        if (blocks_interleave(blocks_[static_cast<std::size_t>(a)], blocks_[static_cast<std::size_t>(b)]))
          out.emplace_back(a, b);
    return out;
  }

  int crossing_count() const { return static_cast<int>(crossing_block_pairs().size()); }

  std::string to_string() const {
    std::string s;
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
      if (bi) s += "|";
      for (std::size_t j = 0; j < blocks_[bi].size(); ++j) {
        if (j) s += ",";
        s += std::to_string(blocks_[bi][j]);
      }
    }
    return s;
  }

  bool operator==(const SetPartition& o) const { return k_ == o.k_ && blocks_ == o.blocks_; }
  bool operator<(const SetPartition& o) const {
    if (k_ != o.k_) return k_ < o.k_;
    return blocks_ < o.blocks_;
  }

  // Two sorted blocks interleave iff ABAB (or BABA) occurs as a subsequence
  // of their merged order.
  static bool blocks_interleave(const std::vector<int>& A, const std::vector<int>& B) {
    // A and B are sorted and disjoint; scan the merged sequence and count
    // label alternations. 4+ runs means interleaving.
    std::size_t ia = 0, ib = 0;
    int runs = 0, last = -1;  // 0 = from A, 1 = from B
    while (ia < A.size() || ib < B.size()) {
      int take;
      if (ib >= B.size() || (ia < A.size() && A[ia] < B[ib])) {
        take = 0;
        ++ia;
      } else {
        take = 1;
        ++ib;
      }
      if (take != last) {
        ++runs;
        last = take;
      }
      if (runs >= 4) return true;
    }
    return false;
  }

private:
  void check_pos(int r) const {
    if (r < 1 || r > k_) throw std::domain_error("set partition: position out of range");
  }

  int k_;
  std::vector<std::vector<int>> blocks_;
  std::vector<int> block_of_;
};

// A set partition with all blocks of size exactly two.
class PairPartition {
public:
  explicit PairPartition(SetPartition p) : base_(std::move(p)) {
    if (!base_.is_pair_partition()) throw std::domain_error("pair partition: a block has size != 2");
    for (const auto& b : base_.blocks()) pairs_.emplace_back(b[0], b[1]);
  }

  PairPartition(int k, std::vector<std::pair<int, int>> pairs)
      : PairPartition(SetPartition(k, to_blocks(std::move(pairs)))) {}

  const SetPartition& partition() const { return base_; }
  int size() const { return base_.size(); }
  int block_count() const { return base_.block_count(); }
  // Block bi as (r, s) with r < s, blocks ordered by r.
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
  std::vector<std::pair<int, int>> crossing_block_pairs() const { return base_.crossing_block_pairs(); }
  int crossing_count() const { return base_.crossing_count(); }
  bool is_noncrossing() const { return base_.is_noncrossing(); }
  std::string to_string() const { return base_.to_string(); }
  bool operator==(const PairPartition& o) const { return base_ == o.base_; }

private:
  static std::vector<std::vector<int>> to_blocks(std::vector<std::pair<int, int>> pairs) {
    std::vector<std::vector<int>> blocks;
    for (auto [r, s] : pairs) blocks.push_back({r, s});
    return blocks;
  }

  SetPartition base_;
  std::vector<std::pair<int, int>> pairs_;
};

// ====== enumeration ======

enum class PartitionFilter { all, pair, noncrossing, noncrossing_pair, min_block_two };

namespace detail {

// Restricted-growth-string enumeration with filter-aware pruning. blocks is
// the partial partition; emit() receives each completed canonical partition.
template <class Emit>
void rgs_enumerate(int k, PartitionFilter filter, Emit&& emit) {
  const bool cap_two = filter == PartitionFilter::pair || filter == PartitionFilter::noncrossing_pair;
  const bool floor_two = cap_two || filter == PartitionFilter::min_block_two;
  const bool no_crossings =
      filter == PartitionFilter::noncrossing || filter == PartitionFilter::noncrossing_pair;
  std::vector<std::vector<int>> blocks;
  int deficit = 0;  // blocks still below size two
  auto creates_crossing = [&](std::size_t target) {
    // Appending the running maximum to blocks[target] crosses iff another
    // block has two elements straddling an element of blocks[target].
    for (std::size_t o = 0; o < blocks.size(); ++o) {
      if (o == target || blocks[o].size() < 2) continue;
      int lo = blocks[o].front(), hi = blocks[o].back();
      for (int t : blocks[target])
        if (lo < t && t < hi) return true;
    }
    return false;
  };
  auto rec = [&](auto&& self, int next) -> void {
    if (next > k) {
      if (!floor_two || deficit == 0) emit(blocks);
      return;
    }
    int left_after = k - next;  // elements still unplaced once `next` is placed
    // Extend an existing block. Access by index, never by reference: the
    // recursive call appends (and later removes) blocks, which can
    // reallocate the outer vector.
    std::size_t present = blocks.size();
    for (std::size_t bi = 0; bi < present; ++bi) {
      if (cap_two && blocks[bi].size() >= 2) continue;
      if (no_crossings && creates_crossing(bi)) continue;
      bool was_single = blocks[bi].size() == 1;
      if (floor_two && deficit - (was_single ? 1 : 0) > left_after) continue;
      blocks[bi].push_back(next);
      if (was_single) --deficit;
      self(self, next + 1);
      if (was_single) ++deficit;
      blocks[bi].pop_back();
    }
    // Open a new block if its deficit can still be filled.
    if (!floor_two || deficit + 1 <= left_after) {
      blocks.emplace_back(1, next);
      ++deficit;
      self(self, next + 1);
      --deficit;
      blocks.pop_back();
    }
  };
  rec(rec, 1);
}

}  // namespace detail

// All partitions of [k] passing the filter, in the deterministic order of
// the restricted-growth enumeration. Pair filters on odd k give an empty
// list; k = 0 is a domain error.
inline std::vector<SetPartition> enumerate_partitions(int k, PartitionFilter filter = PartitionFilter::all) {
  if (k < 1) throw std::domain_error("enumerate_partitions: k must be >= 1");
  std::vector<SetPartition> out;
  if ((filter == PartitionFilter::pair || filter == PartitionFilter::noncrossing_pair) && k % 2 != 0)
    return out;
  detail::rgs_enumerate(k, filter, [&](const std::vector<std::vector<int>>& blocks) {
    out.emplace_back(k, blocks);
  });
  return out;
}

inline std::vector<PairPartition> enumerate_pair_partitions(int k, bool noncrossing_only = false) {
  std::vector<PairPartition> out;
  for (auto& p : enumerate_partitions(
           k, noncrossing_only ? PartitionFilter::noncrossing_pair : PartitionFilter::pair))
    out.emplace_back(std::move(p));
  return out;
}

// ker(i): positions grouped by equal value.
inline SetPartition kernel(const IndexTuple& i) {
  if (i.empty()) throw std::domain_error("kernel: empty tuple");
  std::map<int, std::vector<int>> by_value;
  for (int r = 1; r <= static_cast<int>(i.size()); ++r) by_value[i[static_cast<std::size_t>(r - 1)]].push_back(r);
  std::vector<std::vector<int>> blocks;
  for (auto& [v, b] : by_value) blocks.push_back(std::move(b));
  return SetPartition(static_cast<int>(i.size()), std::move(blocks));
}

// ====== refinement iteration ======

// Lazily yields every partition <= rho whose blocks all have size >=
// min_block_size, by combining independent partitions of each rho-block.
// pairs_only restricts to blocks of size exactly two (for laws where only
// the second cumulant can contribute). Single-consumer; yield order is
// deterministic.
class RefinementIterator {
public:
  RefinementIterator(const SetPartition& rho, int min_block_size, bool pairs_only = false)
      : k_(rho.size()) {
    PartitionFilter filter = pairs_only ? PartitionFilter::pair
                             : min_block_size >= 2 ? PartitionFilter::min_block_two
                                                   : PartitionFilter::all;
    for (const auto& b : rho.blocks()) {
      std::vector<std::vector<std::vector<int>>> parts;
      detail::rgs_enumerate(static_cast<int>(b.size()), filter,
                            [&](const std::vector<std::vector<int>>& local) {
                              std::vector<std::vector<int>> relabeled;
                              for (const auto& lb : local) {
                                std::vector<int> nb;
                                for (int x : lb) nb.push_back(b[static_cast<std::size_t>(x - 1)]);
                                relabeled.push_back(std::move(nb));
                              }
                              parts.push_back(std::move(relabeled));
                            });
      if (parts.empty()) {  // a block too small to split with the size floor
        exhausted_ = true;
        return;
      }
      per_block_.push_back(std::move(parts));
    }
    odometer_.assign(per_block_.size(), 0);
  }

  std::optional<SetPartition> next() {
    if (exhausted_) return std::nullopt;
    std::vector<std::vector<int>> blocks;
    for (std::size_t bi = 0; bi < per_block_.size(); ++bi)
      for (const auto& blk : per_block_[bi][odometer_[bi]]) blocks.push_back(blk);
    SetPartition out(k_, std::move(blocks));
    // Advance the odometer.
    std::size_t pos = 0;
    while (pos < odometer_.size()) {
      if (++odometer_[pos] < per_block_[pos].size()) break;
      odometer_[pos] = 0;
      ++pos;
    }
    if (pos == odometer_.size()) exhausted_ = true;
    return out;
  }

private:
  int k_;
  bool exhausted_ = false;
  std::vector<std::vector<std::vector<std::vector<int>>>> per_block_;
  std::vector<std::size_t> odometer_;
};

// ====== graph-relative noncrossing predicate ======

// pi is admissible for (i, g) iff pi <= ker(i) and, for every interleaving
// pair of blocks, the two block values are adjacent in g. Equal block values
// in an interleaving pair would need a loop, hence always fail.
inline bool is_gn_noncrossing(const SetPartition& pi, const IndexTuple& i, const SimpleGraph& g) {
  if (pi.size() != static_cast<int>(i.size()))
    throw std::domain_error("is_gn_noncrossing: partition and tuple sizes differ");
  for (const auto& b : pi.blocks()) {
    int v0 = i[static_cast<std::size_t>(b.front() - 1)];
    for (int r : b)
      if (i[static_cast<std::size_t>(r - 1)] != v0) return false;
  }
  for (auto [a, b] : pi.crossing_block_pairs()) {
    int va = i[static_cast<std::size_t>(pi.block(a).front() - 1)];
    int vb = i[static_cast<std::size_t>(pi.block(b).front() - 1)];
    if (va == vb || !g.has_edge(va, vb)) return false;
  }
  return true;
}

// Intersection graph of a pair partition: one vertex per block (canonical
// block order, 1-based), edges between interleaving blocks.
inline SimpleGraph intersection_graph(const PairPartition& pi) {
  SimpleGraph f(pi.block_count());
  for (auto [a, b] : pi.crossing_block_pairs()) f.add_edge(a + 1, b + 1);
  return f;
}

// ====== cached pair-partition shapes ======

// Hot loops over pair partitions reuse this table: pairs plus precomputed
// interleaving block pairs per partition, memoized by word length.
struct PairPartitionInfo {
  std::vector<std::pair<int, int>> pairs;           // (r, s), r < s, 1-based positions
  std::vector<std::pair<int, int>> crossing_pairs;  // 0-based block index pairs
};

inline const std::vector<PairPartitionInfo>& pair_partition_table(int p) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<std::vector<PairPartitionInfo>>> cache;
  if (p < 0 || p > 16) throw std::domain_error("pair_partition_table: supported word lengths are 0..16");
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(p);
  if (it == cache.end()) {
    auto table = std::make_unique<std::vector<PairPartitionInfo>>();
    if (p > 0 && p % 2 == 0) {
      for (const auto& pp : enumerate_pair_partitions(p))
        table->push_back({pp.pairs(), pp.crossing_block_pairs()});
    }
    it = cache.emplace(p, std::move(table)).first;
  }
  return *it->second;
}

}  // namespace epsclt
