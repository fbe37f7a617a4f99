#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace ergmk {

/// An edge variable (i, j). For undirected graphs (i, j) and (j, i) denote the
/// same variable.
struct Toggle {
  int i = 0;
  int j = 0;

  friend bool operator==(const Toggle&, const Toggle&) = default;
};

enum class NeighborClass { HPlus, HMinus };

/// Fixed-order simple graph with one bit per edge variable.
///
/// Edge variables are numbered row-major: directed graphs enumerate every
/// ordered pair (i, j), i != j; undirected graphs enumerate pairs i < j only.
/// The same numbering is used for the exact state-space index, so bit k of
/// state_index() is edge variable k.
class Graph {
 public:
  Graph() = default;
  Graph(int n, bool directed);

  int n() const { return n_; }
  bool directed() const { return directed_; }
  std::size_t num_dyads() const { return m_; }

  bool has_edge(int i, int j) const;
  void set_edge(int i, int j, bool present);
  /// In-place toggle; throws on invalid indices.
  void toggle(Toggle t);
  bool has(std::size_t k) const { return (bits_[k >> 6] >> (k & 63)) & 1u; }
  void flip(std::size_t k) { bits_[k >> 6] ^= std::uint64_t{1} << (k & 63); }

  std::size_t index_of(Toggle t) const;
  Toggle toggle_at(std::size_t k) const;
  void check_toggle(Toggle t) const;

  int edge_count() const;
  int out_degree(int i) const;
  int in_degree(int i) const;
  /// Undirected degree.
  int degree(int i) const { return out_degree(i); }

  /// Bits as an integer; requires num_dyads() <= 64.
  std::uint64_t state_index() const;
  static Graph from_state_index(int n, bool directed, std::uint64_t index);
  std::uint64_t hash() const;

  const std::vector<std::uint64_t>& words() const { return bits_; }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  int n_ = 0;
  bool directed_ = false;
  std::size_t m_ = 0;
  std::vector<std::uint64_t> bits_;
};

std::size_t dyad_count(int n, bool directed);

/// Toggles in canonical (row-major) order.
std::vector<Toggle> toggle_table(int n, bool directed);

Graph apply_toggle(const Graph& g, Toggle t);
NeighborClass classify(const Graph& g, Toggle t);
std::vector<std::pair<Toggle, NeighborClass>> hamming_neighbors(const Graph& g);
int hamming_distance(const Graph& a, const Graph& b);

int edge_count(const Graph& g);
/// Number of dyads with both arcs present. Directed graphs only.
int mutual_count(const Graph& g);

/// Edge-list text: "directed n" or "undirected n", then one "i j" per line.
Graph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace ergmk
