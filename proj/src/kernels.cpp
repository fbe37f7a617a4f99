#include "ergmk/kernels.hpp"

#include <omp.h>

#include <cstdint>
#include <stdexcept>


namespace ergmk {

namespace kernels {

void DeltaCache::resize(std::size_t m) {
  delta.assign(m, 0.0);
  delta_f.assign(m, 0.0);
  delta_d.assign(m, 0.0);
}

namespace {

inline void delta_one(const ProcessSpec& spec, const Graph& g, Toggle t, std::size_t k,
                      DeltaCache& out) {
  if (spec.potential) out.delta[k] = change_score_unchecked(*spec.potential, g, t);
  if (spec.formation) out.delta_f[k] = change_score_unchecked(*spec.formation, g, t);
  if (spec.dissolution) out.delta_d[k] = change_score_unchecked(*spec.dissolution, g, t);
}

inline void fill_row(const ProcessSpec& spec, const StateSpace& space, std::size_t a,
                     std::span<const Toggle> toggles, RateMatrix& r) {
  const Graph g = space.graph(a);
  RateInputs in;
  in.source = source_potential(spec, g);
  const auto m = toggles.size();
  const auto base = a * m;
  double out = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    fill_deltas(spec, g, toggles[k], in);
    const double v = rate_from_inputs(spec, in);
    r.cols[base + k] = static_cast<std::uint32_t>(a ^ (std::size_t{1} << k));
    r.values[base + k] = v;
    out += v;
  }
  r.diagonal[a] = -out;
}

RateMatrix empty_matrix(const StateSpace& space) {
  RateMatrix r;
  r.size = space.size();
  const auto m = space.dyads();
  r.row_ptr.resize(r.size + 1);
  for (std::size_t a = 0; a <= r.size; ++a) r.row_ptr[a] = a * m;
  r.cols.resize(r.size * m);
  r.values.resize(r.size * m);
  r.diagonal.resize(r.size);
  return r;
}

}  // namespace

void compute_deltas_serial(const ProcessSpec& spec, const Graph& g, std::span<const Toggle> toggles,
                           DeltaCache& out) {
  out.resize(toggles.size());
  for (std::size_t k = 0; k < toggles.size(); ++k) delta_one(spec, g, toggles[k], k, out);
}

void compute_deltas(const ProcessSpec& spec, const Graph& g, std::span<const Toggle> toggles,
                    DeltaCache& out) {
  out.resize(toggles.size());
  const auto m = static_cast<std::int64_t>(toggles.size());
#pragma omp parallel for schedule(static) if (toggles.size() >= kParallelScanThreshold)
  for (std::int64_t k = 0; k < m; ++k)
    delta_one(spec, g, toggles[static_cast<std::size_t>(k)], static_cast<std::size_t>(k), out);
}

void update_deltas(const ProcessSpec& spec, const Graph& g, std::span<const Toggle> toggles,
                   std::span<const std::size_t> indices, DeltaCache& cache) {
  for (auto k : indices) delta_one(spec, g, toggles[k], k, cache);
}

RateInputs inputs_at(const ProcessSpec& spec, const Graph& g, const DeltaCache& cache, std::size_t k,
                     double source) {
  RateInputs in;
  in.cls = g.has(k) ? NeighborClass::HMinus : NeighborClass::HPlus;
  in.neighbors = g.num_dyads();
  in.source = source;
  if (spec.potential) in.delta = cache.delta[k];
  if (spec.formation) in.delta_f = cache.delta_f[k];
  if (spec.dissolution) in.delta_d = cache.delta_d[k];
  return in;
}

void scan_rates_serial(const ProcessSpec& spec, const Graph& g, std::span<const Toggle> toggles,
                       std::span<double> out) {
  if (out.size() != toggles.size()) throw std::invalid_argument("output span size mismatch");
  const double source = source_potential(spec, g);
  RateInputs in;
  in.source = source;
  for (std::size_t k = 0; k < toggles.size(); ++k) {
    fill_deltas(spec, g, toggles[k], in);
    out[k] = rate_from_inputs(spec, in);
  }
}

void scan_rates(const ProcessSpec& spec, const Graph& g, std::span<const Toggle> toggles,
                std::span<double> out) {
  if (out.size() != toggles.size()) throw std::invalid_argument("output span size mismatch");
  const double source = source_potential(spec, g);
  const auto m = static_cast<std::int64_t>(toggles.size());
#pragma omp parallel if (toggles.size() >= kParallelScanThreshold)
  {
    RateInputs in;
    in.source = source;
#pragma omp for schedule(static)
    for (std::int64_t k = 0; k < m; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      fill_deltas(spec, g, toggles[kk], in);
      out[kk] = rate_from_inputs(spec, in);
    }
  }
}

RateMatrix assemble_rate_matrix_serial(const ProcessSpec& spec, const StateSpace& space) {
  validate(spec, space.graph(0));
  const auto toggles = toggle_table(space.n(), space.directed());
  RateMatrix r = empty_matrix(space);
  for (std::size_t a = 0; a < r.size; ++a) fill_row(spec, space, a, toggles, r);
  return r;
}

RateMatrix assemble_rate_matrix(const ProcessSpec& spec, const StateSpace& space) {
  validate(spec, space.graph(0));
  const auto toggles = toggle_table(space.n(), space.directed());
  RateMatrix r = empty_matrix(space);
  const auto size = static_cast<std::int64_t>(r.size);
#pragma omp parallel for schedule(static) if (r.size >= 64)
  for (std::int64_t a = 0; a < size; ++a) fill_row(spec, space, static_cast<std::size_t>(a), toggles, r);
  return r;
}

int max_threads() { return omp_get_max_threads(); }

void set_threads(int n) {
  if (n >= 1) omp_set_num_threads(n);
}

}  // namespace kernels
}  // namespace ergmk
