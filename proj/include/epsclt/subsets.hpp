#pragma once

// Layer subsets J ⊆ {1..L} as bitmasks, their canonical enumeration,
// and word specifications (J_1..J_p with adjoint marks).

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace epsclt {

// Bit l-1 set  <=>  layer l in the subset. Layers are 1-based.
using Subset = std::uint32_t;

inline constexpr int kMaxLayers = 6;  // matrix decorations are 2^L x 2^L

inline int subset_size(Subset J) { return __builtin_popcount(J); }

inline bool subset_contains(Subset J, int layer) {
  return (J >> (layer - 1)) & 1u;
}

inline Subset full_subset(int L) { return (Subset{1} << L) - 1; }

inline std::vector<int> subset_elements(Subset J) {
  std::vector<int> out;
  for (int l = 1; J != 0; ++l, J >>= 1)
    if (J & 1u) out.push_back(l);
  return out;
}

inline std::string subset_to_string(Subset J) {
  std::string s = "{";
  bool first = true;
  for (int l : subset_elements(J)) {
    if (!first) s += ",";
    s += std::to_string(l);
    first = false;
  }
  return s + "}";
}

// Canonical order: by size, then lexicographically on the sorted element
// lists ({1,4} precedes {2,3}). This fixes vertex numbering wherever a
// graph or table is indexed by subsets.
inline bool subset_canonical_less(Subset a, Subset b) {
  int sa = subset_size(a), sb = subset_size(b);
  if (sa != sb) return sa < sb;
  std::vector<int> ea = subset_elements(a), eb = subset_elements(b);
  return ea < eb;
}

inline std::vector<Subset> nonempty_subsets(int L) {
  if (L < 1 || L > kMaxLayers) throw std::domain_error("layer count must be in [1," + std::to_string(kMaxLayers) + "]");
  std::vector<Subset> out;
  out.reserve((std::size_t{1} << L) - 1);
  for (Subset m = 1; m < (Subset{1} << L); ++m) out.push_back(m);
  std::sort(out.begin(), out.end(), subset_canonical_less);
  return out;
}

// 0-based position of J within nonempty_subsets(L); -1 if empty/out of range.
inline int subset_canonical_index(Subset J, int L) {
  if (J == 0 || J >= (Subset{1} << L)) return -1;
  int idx = 0;
  for (Subset m = 1; m < (Subset{1} << L); ++m)
    if (m != J && subset_canonical_less(m, J)) ++idx;
  return idx;
}

// ====== words ======

enum class Star : std::uint8_t { one = 0, star = 1 };

using AlphaWord = std::vector<Star>;

// Parses strings like "1*1*" or "11" into adjoint marks.
inline AlphaWord alpha_from_string(const std::string& s) {
  AlphaWord out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '1')
      out.push_back(Star::one);
    else if (c == '*')
      out.push_back(Star::star);
    else
      throw std::invalid_argument(std::string("bad adjoint mark '") + c + "' (want '1' or '*')");
  }
  return out;
}

inline std::string alpha_to_string(const AlphaWord& a) {
  std::string s;
  for (Star x : a) s += (x == Star::one) ? '1' : '*';
  return s;
}

inline AlphaWord ones_alpha(int p) { return AlphaWord(p, Star::one); }

inline AlphaWord alternating_alpha(int p) {
  AlphaWord a(p);
  for (int r = 0; r < p; ++r) a[r] = (r % 2 == 0) ? Star::one : Star::star;
  return a;
}

// A word s_{J_1}^{alpha_1} ... s_{J_p}^{alpha_p} over L layers.
struct WordSpec {
  int L = 0;
  std::vector<Subset> J;
  AlphaWord alpha;

  int length() const { return static_cast<int>(J.size()); }

  void validate() const {
    if (L < 1 || L > kMaxLayers) throw std::domain_error("word spec: layer count out of range");
    if (J.size() != alpha.size()) throw std::domain_error("word spec: J and alpha lengths differ");
    if (J.empty()) throw std::domain_error("word spec: empty word");
    for (Subset j : J)
      if (j == 0 || j >= (Subset{1} << L))
        throw std::domain_error("word spec: subsets must be nonempty within {1..L}");
  }
};

}  // namespace epsclt
