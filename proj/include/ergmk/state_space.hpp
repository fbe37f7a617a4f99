#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "ergmk/graph.hpp"

namespace ergmk {

/// Hard cap on enumerated edge variables (2^20 states).
inline constexpr std::size_t kMaxEnumeratedDyads = 20;

/// Every graph of order n, indexed by its adjacency bits.
class StateSpace {
 public:
  /// Throws CapExceeded when the space has more than 2^max_dyads states.
  StateSpace(int n, bool directed, std::size_t max_dyads = kMaxEnumeratedDyads);

  int n() const { return n_; }
  bool directed() const { return directed_; }
  std::size_t dyads() const { return m_; }
  std::size_t size() const { return std::size_t{1} << m_; }

  Graph graph(std::size_t index) const { return Graph::from_state_index(n_, directed_, index); }
  std::size_t index(const Graph& g) const { return static_cast<std::size_t>(g.state_index()); }

 private:
  int n_;
  bool directed_;
  std::size_t m_;
};

/// Sparse generator of a finite CTMC: off-diagonal rates in CSR form plus the
/// diagonal R_aa = -sum_b R_ab.
struct RateMatrix {
  std::size_t size = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<std::uint32_t> cols;
  std::vector<double> values;
  std::vector<double> diagonal;

  double exit_rate(std::size_t a) const { return -diagonal[a]; }
  double at(std::size_t a, std::size_t b) const;
  double max_exit_rate() const;

  /// Builds from per-row off-diagonal entries; the diagonal is filled in.
  static RateMatrix from_rows(const std::vector<std::vector<std::pair<std::uint32_t, double>>>& rows);
};

}  // namespace ergmk
