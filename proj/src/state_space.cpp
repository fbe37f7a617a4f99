#include "ergmk/state_space.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "ergmk/errors.hpp"

namespace ergmk {

StateSpace::StateSpace(int n, bool directed, std::size_t max_dyads)
    : n_(n), directed_(directed), m_(n >= 1 ? dyad_count(n, directed) : 0) {
  if (n < 1) throw std::invalid_argument("graph order must be >= 1");
  const auto cap = max_dyads < kMaxEnumeratedDyads ? max_dyads : kMaxEnumeratedDyads;
  if (m_ > cap)
    throw CapExceeded("state space of " + std::to_string(m_) + " edge variables exceeds the cap of 2^" +
                      std::to_string(cap) + " states");
}

double RateMatrix::at(std::size_t a, std::size_t b) const {
  if (a == b) return diagonal[a];
  for (auto p = row_ptr[a]; p < row_ptr[a + 1]; ++p)
    if (cols[p] == b) return values[p];
  return 0.0;
}

double RateMatrix::max_exit_rate() const {
  double m = 0.0;
  for (double d : diagonal) m = std::max(m, -d);
  return m;
}

RateMatrix RateMatrix::from_rows(
    const std::vector<std::vector<std::pair<std::uint32_t, double>>>& rows) {
  RateMatrix r;
  r.size = rows.size();
  r.row_ptr.assign(r.size + 1, 0);
  r.diagonal.assign(r.size, 0.0);
  for (std::size_t a = 0; a < r.size; ++a) r.row_ptr[a + 1] = r.row_ptr[a] + rows[a].size();
  r.cols.reserve(r.row_ptr.back());
  r.values.reserve(r.row_ptr.back());
  for (std::size_t a = 0; a < r.size; ++a) {
    double out = 0.0;
    for (const auto& [b, v] : rows[a]) {
      if (b == a || b >= r.size) throw std::invalid_argument("rate matrix entry out of range");
      if (!(v >= 0.0)) throw std::invalid_argument("rates must be non-negative");
      r.cols.push_back(b);
      r.values.push_back(v);
      out += v;
    }
    r.diagonal[a] = -out;
  }
  return r;
}

}  // namespace ergmk
