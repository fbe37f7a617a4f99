#include "ergmk/exact.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ergmk/errors.hpp"
#include "ergmk/kernels.hpp"

namespace ergmk {

namespace {

std::vector<double> transpose_apply(const RateMatrix& r, const std::vector<double>& x) {
  std::vector<double> y(r.size, 0.0);
  for (std::size_t a = 0; a < r.size; ++a) {
    y[a] += x[a] * r.diagonal[a];
    for (auto p = r.row_ptr[a]; p < r.row_ptr[a + 1]; ++p) y[r.cols[p]] += x[a] * r.values[p];
  }
  return y;
}

void normalise(std::vector<double>& p) {
  for (auto& v : p)
    if (v < 0.0) v = 0.0;
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& v : p) v /= s;
}

std::vector<double> solve_dense(const RateMatrix& r) {
  const auto n = static_cast<Eigen::Index>(r.size);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t s = 0; s < r.size; ++s) {
    a(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) = r.diagonal[s];
    for (auto p = r.row_ptr[s]; p < r.row_ptr[s + 1]; ++p)
      a(static_cast<Eigen::Index>(r.cols[p]), static_cast<Eigen::Index>(s)) += r.values[p];
  }
  // last balance equation is redundant; replace it by sum(pi) = 1
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double scale = a.row(i).cwiseAbs().maxCoeff();
    if (scale > 0.0) {
      a.row(i) /= scale;
      b(i) /= scale;
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  Eigen::VectorXd x = lu.solve(b);
  x += lu.solve(b - a * x);
  if (!x.allFinite()) throw std::runtime_error("stationary solve is numerically singular");
  std::vector<double> pi(x.data(), x.data() + n);
  normalise(pi);
  return pi;
}

std::vector<double> solve_iterative(const RateMatrix& r) {
  const double lambda = 1.05 * r.max_exit_rate();
  std::vector<double> pi(r.size, 1.0 / static_cast<double>(r.size));
  for (int it = 0; it < 2'000'000; ++it) {
    const auto flow = transpose_apply(r, pi);
    double worst = 0.0;
    for (std::size_t a = 0; a < r.size; ++a) {
      pi[a] += flow[a] / lambda;
      worst = std::max(worst, std::abs(flow[a]));
    }
    if (worst <= 1e-13 * lambda) {
      normalise(pi);
      return pi;
    }
  }
  throw std::runtime_error("iterative stationary solve did not converge");
}

double log_poisson(double mean, std::size_t k) {
  return -mean + static_cast<double>(k) * std::log(mean) - std::lgamma(static_cast<double>(k) + 1.0);
}

}  // namespace

RateMatrix build_rate_matrix(const ProcessSpec& spec, const StateSpace& space) {
  return kernels::assemble_rate_matrix(spec, space);
}

int strongly_connected_components(const RateMatrix& r) {
  // Kosaraju with explicit stacks over the positive pattern
  const auto n = r.size;
  std::vector<std::vector<std::uint32_t>> rev(n);
  for (std::size_t a = 0; a < n; ++a)
    for (auto p = r.row_ptr[a]; p < r.row_ptr[a + 1]; ++p)
      if (r.values[p] > 0.0) rev[r.cols[p]].push_back(static_cast<std::uint32_t>(a));

  std::vector<char> seen(n, 0);
  std::vector<std::size_t> order;
  order.reserve(n);
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    seen[s] = 1;
    stack.emplace_back(s, r.row_ptr[s]);
    while (!stack.empty()) {
      auto& [v, p] = stack.back();
      if (p < r.row_ptr[v + 1]) {
        const auto w = r.cols[p];
        const bool live = r.values[p] > 0.0;
        ++p;
        if (live && !seen[w]) {
          seen[w] = 1;
          stack.emplace_back(w, r.row_ptr[w]);
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }

  std::vector<int> comp(n, -1);
  int count = 0;
  std::vector<std::size_t> todo;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[*it] >= 0) continue;
    comp[*it] = count;
    todo.push_back(*it);
    while (!todo.empty()) {
      const auto v = todo.back();
      todo.pop_back();
      for (auto w : rev[v])
        if (comp[w] < 0) {
          comp[w] = count;
          todo.push_back(w);
        }
    }
    ++count;
  }
  return count;
}

std::vector<double> solve_stationary(const RateMatrix& r) {
  if (r.size == 0) throw std::invalid_argument("empty rate matrix");
  if (r.size == 1) return {1.0};
  const int components = strongly_connected_components(r);
  if (components != 1)
    throw ReducibleChain("rate matrix is reducible (" + std::to_string(components) + " components)",
                         components);
  return r.size <= kDenseSolveLimit ? solve_dense(r) : solve_iterative(r);
}

std::vector<double> analytic_equilibrium(const ProcessSpec& spec, const StateSpace& space, double* log_z) {
  std::vector<double> w(space.size());
  for (std::size_t s = 0; s < space.size(); ++s) w[s] = equilibrium_log_weight(spec, space.graph(s));
  const double top = *std::max_element(w.begin(), w.end());
  double z = 0.0;
  for (auto& v : w) {
    v = std::exp(v - top);
    z += v;
  }
  for (auto& v : w) v /= z;
  if (log_z) *log_z = top + std::log(z);
  return w;
}

StationaryReport compare_equilibrium(const ProcessSpec& spec, const StateSpace& space) {
  const auto r = build_rate_matrix(spec, space);
  StationaryReport rep;
  rep.states = space.size();
  rep.pi_solved = solve_stationary(r);
  rep.pi_analytic = analytic_equilibrium(spec, space, &rep.log_Z);
  rep.tv_distance = total_variation(rep.pi_solved, rep.pi_analytic);
  for (std::size_t s = 0; s < rep.states; ++s)
    rep.max_rel_error = std::max(rep.max_rel_error,
                                 std::abs(rep.pi_solved[s] - rep.pi_analytic[s]) / rep.pi_analytic[s]);
  rep.residual = stationary_residual(r, rep.pi_solved);
  return rep;
}

std::vector<double> transient_distribution(const RateMatrix& r, const std::vector<double>& p0, double t) {
  if (p0.size() != r.size) throw std::invalid_argument("initial distribution has the wrong length");
  if (!(t >= 0.0)) throw std::invalid_argument("time must be non-negative");
  const double top = r.max_exit_rate();
  if (t == 0.0 || top == 0.0) return p0;
  const double lambda = 1.05 * top;
  const double mean = lambda * t;
  const auto k_max = static_cast<std::size_t>(mean + 20.0 * std::sqrt(mean) + 100.0);

  std::vector<double> v = p0;
  std::vector<double> out(r.size, 0.0);
  double mass = 0.0;
  for (std::size_t k = 0;; ++k) {
    const double w = std::exp(log_poisson(mean, k));
    mass += w;
    for (std::size_t s = 0; s < r.size; ++s) out[s] += w * v[s];
    if ((static_cast<double>(k) > mean && 1.0 - mass <= 1e-12) || k >= k_max) break;
    const auto flow = transpose_apply(r, v);
    for (std::size_t s = 0; s < r.size; ++s) v[s] += flow[s] / lambda;
  }
  return out;
}

double embedded_chain_check(const RateMatrix& r) {
  RateMatrix jump = r;
  for (std::size_t a = 0; a < r.size; ++a) {
    const double u = r.exit_rate(a);
    if (!(u > 0.0)) throw AbsorbingState("embedded chain undefined at an absorbing state");
    for (auto p = r.row_ptr[a]; p < r.row_ptr[a + 1]; ++p) jump.values[p] = r.values[p] / u;
    jump.diagonal[a] = -1.0;
  }
  const auto pi = solve_stationary(r);
  auto from_jump = solve_stationary(jump);
  for (std::size_t a = 0; a < r.size; ++a) from_jump[a] /= r.exit_rate(a);
  normalise(from_jump);
  double worst = 0.0;
  for (std::size_t a = 0; a < r.size; ++a) worst = std::max(worst, std::abs(pi[a] - from_jump[a]));
  return worst;
}

double embedded_chain_check(const ProcessSpec& spec, const StateSpace& space) {
  return embedded_chain_check(build_rate_matrix(spec, space));
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw std::invalid_argument("distributions have different lengths");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

double stationary_residual(const RateMatrix& r, const std::vector<double>& pi) {
  const auto flow = transpose_apply(r, pi);
  double worst = 0.0;
  for (double f : flow) worst = std::max(worst, std::abs(f));
  const double scale = r.max_exit_rate();
  return scale > 0.0 ? worst / scale : worst;
}

double global_balance_error(const RateMatrix& r, const std::vector<double>& pi) {
  std::vector<double> inflow(r.size, 0.0);
  for (std::size_t b = 0; b < r.size; ++b)
    for (auto p = r.row_ptr[b]; p < r.row_ptr[b + 1]; ++p) inflow[r.cols[p]] += pi[b] * r.values[p];
  double worst = 0.0;
  for (std::size_t a = 0; a < r.size; ++a) {
    const double out = pi[a] * r.exit_rate(a);
    const double err = std::abs(inflow[a] - out);
    if (out > 0.0) worst = std::max(worst, err / out);
    else worst = std::max(worst, err);
  }
  return worst;
}

double detailed_balance_error(const RateMatrix& r, const std::vector<double>& pi) {
  double worst = 0.0;
  for (std::size_t a = 0; a < r.size; ++a)
    for (auto p = r.row_ptr[a]; p < r.row_ptr[a + 1]; ++p) {
      const auto b = r.cols[p];
      const double fwd = pi[a] * r.values[p];
      const double back = pi[b] * r.at(b, a);
      const double scale = std::max(fwd, back);
      if (scale > 0.0) worst = std::max(worst, std::abs(fwd - back) / scale);
    }
  return worst;
}

std::vector<double> edge_marginals(const StateSpace& space, const std::vector<double>& pi) {
  std::vector<double> out(space.dyads(), 0.0);
  for (std::size_t s = 0; s < space.size(); ++s)
    for (std::size_t k = 0; k < space.dyads(); ++k)
      if ((s >> k) & 1u) out[k] += pi[s];
  return out;
}

}  // namespace ergmk
