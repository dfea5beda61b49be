#pragma once

// Step graphons with exact cell arithmetic and homomorphism densities
// rho(f, w) and rho(f, g).

#include "epsclt/graphs.hpp"
#include "epsclt/scalar.hpp"

#include <stdexcept>
#include <vector>

namespace epsclt {

// Symmetric step function [0,1]^2 -> [0,1] with breakpoints
// 0 = b_0 < b_1 < ... < b_m = 1 and constant value on each cell.
template <ScalarType S>
class StepGraphonT {
public:
  StepGraphonT(std::vector<S> breaks, std::vector<std::vector<S>> values)
      : breaks_(std::move(breaks)), values_(std::move(values)) {
    const S zero = scalar_ops<S>::from_int(0);
    const S one = scalar_ops<S>::from_int(1);
    if (breaks_.size() < 2) throw std::domain_error("step graphon: need at least breaks 0 and 1");
    if (!(breaks_.front() == zero) || !(breaks_.back() == one))
      throw std::domain_error("step graphon: breaks must start at 0 and end at 1");
    for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
      if (!(breaks_[i] < breaks_[i + 1])) throw std::domain_error("step graphon: breaks must be strictly increasing");
    std::size_t m = breaks_.size() - 1;
    if (values_.size() != m) throw std::domain_error("step graphon: values must be m x m for m cells");
    for (const auto& row : values_)
      if (row.size() != m) throw std::domain_error("step graphon: values must be m x m for m cells");
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (values_[i][j] < zero || values_[i][j] > one)
          throw std::domain_error("step graphon: values must lie in [0,1]");
        if (!(values_[i][j] == values_[j][i])) throw std::domain_error("step graphon: values must be symmetric");
      }
    }
  }

  static StepGraphonT constant(const S& q) {
    return StepGraphonT({scalar_ops<S>::from_int(0), scalar_ops<S>::from_int(1)}, {{q}});
  }

  int cell_count() const { return static_cast<int>(breaks_.size()) - 1; }
  const std::vector<S>& breaks() const { return breaks_; }
  // 0-based cell indices.
  const S& value(int i, int j) const {
    return values_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  S width(int i) const {
    return breaks_[static_cast<std::size_t>(i) + 1] - breaks_[static_cast<std::size_t>(i)];
  }

  bool is_identically(const S& q) const {
    for (const auto& row : values_)
      for (const auto& v : row)
        if (!(v == q)) return false;
    return true;
  }

  bool operator==(const StepGraphonT& o) const { return breaks_ == o.breaks_ && values_ == o.values_; }

private:
  std::vector<S> breaks_;
  std::vector<std::vector<S>> values_;
};

using StepGraphon = StepGraphonT<Rational>;

// Equal cells of width 1/n; value 1 on cells of edges, 0 elsewhere
// (diagonal cells are 0: no loops).
template <ScalarType S>
StepGraphonT<S> graphon_from_graph(const SimpleGraph& g) {
  int n = g.vertex_count();
  if (n < 1) throw std::domain_error("graphon_from_graph: empty graph");
  std::vector<S> breaks;
  breaks.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) breaks.push_back(scalar_ops<S>::from_rational(Rational(i, n)));
  std::vector<std::vector<S>> values(static_cast<std::size_t>(n),
                                     std::vector<S>(static_cast<std::size_t>(n), scalar_ops<S>::from_int(0)));
  for (int u = 1; u <= n; ++u)
    for (int v = 1; v <= n; ++v)
      if (g.has_edge(u, v))
        values[static_cast<std::size_t>(u - 1)][static_cast<std::size_t>(v - 1)] = scalar_ops<S>::from_int(1);
  return StepGraphonT<S>(std::move(breaks), std::move(values));
}

// Homomorphism density rho(f, w): integral over [0,1]^{V(f)} of the product
// of w over the edges of f, evaluated cell-by-cell. Deterministic cell
// order; one budget term per cell assignment.
template <ScalarType S>
S rho_graphon(const SimpleGraph& f, const StepGraphonT<S>& w, const Budget& budget = Budget()) {
  int v = f.vertex_count();
  if (v < 1) throw std::domain_error("rho_graphon: empty graph");
  auto edges = f.edges();
  int m = w.cell_count();
  // m^v cell assignments.
  std::uint64_t total = 1;
  for (int t = 0; t < v; ++t) {
    if (total > UINT64_MAX / static_cast<std::uint64_t>(m)) throw BudgetError(UINT64_MAX, budget.limit());
    total *= static_cast<std::uint64_t>(m);
  }
  budget.require(total);
  std::vector<int> cell(static_cast<std::size_t>(v), 0);
  Accumulator<S> acc;
  while (true) {
    budget.charge();
    S term = scalar_ops<S>::from_int(1);
    for (int u = 0; u < v; ++u) term *= w.width(cell[static_cast<std::size_t>(u)]);
    if (!(term == scalar_ops<S>::from_int(0))) {
      for (auto [a, b] : edges) {
        term *= w.value(cell[static_cast<std::size_t>(a - 1)], cell[static_cast<std::size_t>(b - 1)]);
        if (term == scalar_ops<S>::from_int(0)) break;
      }
    }
    acc.add(term);
    int pos = 0;
    while (pos < v && ++cell[static_cast<std::size_t>(pos)] == m) {
      cell[static_cast<std::size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == v) break;
  }
  return acc.total();
}

// Homomorphism density rho(f, g) = hom(f, g) / n^{|V(f)|}, counting all
// vertex maps (maps collapsing an edge onto a loop contribute 0). Always
// exact. Equals rho_graphon(f, graphon_from_graph(g)) identically.
inline Rational rho_graph(const SimpleGraph& f, const SimpleGraph& g, const Budget& budget = Budget()) {
  int v = f.vertex_count();
  int n = g.vertex_count();
  if (v < 1 || n < 1) throw std::domain_error("rho_graph: empty graph");
  auto edges = f.edges();
  std::uint64_t total = 1;
  for (int t = 0; t < v; ++t) {
    if (total > UINT64_MAX / static_cast<std::uint64_t>(n)) throw BudgetError(UINT64_MAX, budget.limit());
    total *= static_cast<std::uint64_t>(n);
  }
  budget.require(total);
  std::vector<int> phi(static_cast<std::size_t>(v), 1);
  Integer hom = 0;
  while (true) {
    budget.charge();
    bool ok = true;
    for (auto [a, b] : edges) {
      int pa = phi[static_cast<std::size_t>(a - 1)], pb = phi[static_cast<std::size_t>(b - 1)];
      if (pa == pb || !g.has_edge(pa, pb)) { ok = false; break; }
    }
    if (ok) ++hom;
    int pos = 0;
    while (pos < v && ++phi[static_cast<std::size_t>(pos)] > n) {
      phi[static_cast<std::size_t>(pos)] = 1;
      ++pos;
    }
    if (pos == v) break;
  }
  Integer denom = 1;
  for (int t = 0; t < v; ++t) denom *= n;
  return Rational(hom, denom);
}

}  // namespace epsclt
