#include "ergmk/graph.hpp"

#include <bit>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ergmk {

std::size_t dyad_count(int n, bool directed) {
  const auto nn = static_cast<std::size_t>(n);
  return directed ? nn * (nn - 1) : nn * (nn - 1) / 2;
}

Graph::Graph(int n, bool directed)
    : n_(n), directed_(directed), m_(n >= 1 ? dyad_count(n, directed) : 0) {
  if (n < 1) throw std::invalid_argument("graph order must be >= 1");
  bits_.assign((m_ + 63) / 64, 0);
}

void Graph::check_toggle(Toggle t) const {
  if (t.i < 0 || t.j < 0 || t.i >= n_ || t.j >= n_)
    throw std::out_of_range("vertex index out of range");
  if (t.i == t.j) throw std::invalid_argument("self-loops are not representable");
}

std::size_t Graph::index_of(Toggle t) const {
  const auto n = static_cast<std::size_t>(n_);
  auto i = static_cast<std::size_t>(t.i);
  auto j = static_cast<std::size_t>(t.j);
  if (directed_) return i * (n - 1) + (j < i ? j : j - 1);
  if (i > j) std::swap(i, j);
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

Toggle Graph::toggle_at(std::size_t k) const {
  if (k >= m_) throw std::out_of_range("edge variable index out of range");
  const auto n = static_cast<std::size_t>(n_);
  if (directed_) {
    const auto i = k / (n - 1);
    const auto r = k % (n - 1);
    return {static_cast<int>(i), static_cast<int>(r < i ? r : r + 1)};
  }
  std::size_t i = 0;
  std::size_t row = n - 1;
  while (k >= row) {
    k -= row;
    ++i;
    --row;
  }
  return {static_cast<int>(i), static_cast<int>(i + 1 + k)};
}

bool Graph::has_edge(int i, int j) const {
  check_toggle({i, j});
  return has(index_of({i, j}));
}

void Graph::set_edge(int i, int j, bool present) {
  check_toggle({i, j});
  if (has(index_of({i, j})) != present) flip(index_of({i, j}));
}

void Graph::toggle(Toggle t) {
  check_toggle(t);
  flip(index_of(t));
}

int Graph::edge_count() const {
  int c = 0;
  for (auto w : bits_) c += std::popcount(w);
  return c;
}

int Graph::out_degree(int i) const {
  int d = 0;
  for (int j = 0; j < n_; ++j)
    if (j != i && has(index_of({i, j}))) ++d;
  return d;
}

int Graph::in_degree(int i) const {
  int d = 0;
  for (int j = 0; j < n_; ++j)
    if (j != i && has(index_of({j, i}))) ++d;
  return d;
}

std::uint64_t Graph::state_index() const {
  if (m_ > 64) throw std::length_error("state index needs at most 64 edge variables");
  return bits_.empty() ? 0 : bits_[0];
}

Graph Graph::from_state_index(int n, bool directed, std::uint64_t index) {
  Graph g(n, directed);
  if (g.m_ > 64) throw std::length_error("state index needs at most 64 edge variables");
  if (g.m_ < 64 && (index >> g.m_) != 0) throw std::out_of_range("state index out of range");
  if (!g.bits_.empty()) g.bits_[0] = index;
  return g;
}

std::uint64_t Graph::hash() const {
  if (m_ <= 64) return state_index();
  // FNV-1a over the words
  std::uint64_t h = 1469598103934665603ull;
  for (auto w : bits_) {
    h ^= w;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<Toggle> toggle_table(int n, bool directed) {
  std::vector<Toggle> out;
  out.reserve(dyad_count(n, directed));
  for (int i = 0; i < n; ++i)
    for (int j = directed ? 0 : i + 1; j < n; ++j)
      if (i != j) out.push_back({i, j});
  return out;
}

Graph apply_toggle(const Graph& g, Toggle t) {
  Graph out = g;
  out.toggle(t);
  return out;
}

NeighborClass classify(const Graph& g, Toggle t) {
  return g.has_edge(t.i, t.j) ? NeighborClass::HMinus : NeighborClass::HPlus;
}

std::vector<std::pair<Toggle, NeighborClass>> hamming_neighbors(const Graph& g) {
  std::vector<std::pair<Toggle, NeighborClass>> out;
  out.reserve(g.num_dyads());
  for (std::size_t k = 0; k < g.num_dyads(); ++k)
    out.emplace_back(g.toggle_at(k), g.has(k) ? NeighborClass::HMinus : NeighborClass::HPlus);
  return out;
}

int hamming_distance(const Graph& a, const Graph& b) {
  if (a.n() != b.n() || a.directed() != b.directed())
    throw std::invalid_argument("graphs live on different supports");
  int d = 0;
  for (std::size_t w = 0; w < a.words().size(); ++w) d += std::popcount(a.words()[w] ^ b.words()[w]);
  return d;
}

int edge_count(const Graph& g) { return g.edge_count(); }

int mutual_count(const Graph& g) {
  if (!g.directed()) throw std::invalid_argument("mutual count requires a directed graph");
  int c = 0;
  for (int i = 0; i < g.n(); ++i)
    for (int j = i + 1; j < g.n(); ++j)
      if (g.has(g.index_of({i, j})) && g.has(g.index_of({j, i}))) ++c;
  return c;
}

Graph read_edge_list(std::istream& in) {
  std::string line;
  while (std::getline(in, line) && line.find_first_not_of(" \t\r") == std::string::npos) {
  }
  std::istringstream head(line);
  std::string kind;
  int n = 0;
  if (!(head >> kind >> n) || (kind != "directed" && kind != "undirected"))
    throw std::invalid_argument("edge list header must be 'directed n' or 'undirected n'");
  Graph g(n, kind == "directed");
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    int i = 0, j = 0;
    std::string rest;
    if (!(row >> i >> j) || (row >> rest))
      throw std::invalid_argument("malformed edge on line " + std::to_string(lineno));
    g.set_edge(i, j, true);
  }
  return g;
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << (g.directed() ? "directed " : "undirected ") << g.n() << '\n';
  for (std::size_t k = 0; k < g.num_dyads(); ++k) {
    if (!g.has(k)) continue;
    const auto t = g.toggle_at(k);
    out << t.i << ' ' << t.j << '\n';
  }
}

}  // namespace ergmk
