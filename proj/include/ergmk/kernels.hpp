#pragma once

#include <span>
#include <vector>

#include "ergmk/graph.hpp"
#include "ergmk/process.hpp"
#include "ergmk/state_space.hpp"

// Data-parallel hot loops. Each OpenMP kernel has a `_serial` twin that is the
// reference implementation; both write every output slot from the same
// per-index computation, so results are bitwise identical for any thread count.
namespace ergmk::kernels {

/// Change scores of every toggle from one state.
struct DeltaCache {
  std::vector<double> delta;
  std::vector<double> delta_f;
  std::vector<double> delta_d;

  void resize(std::size_t m);
};

/// Below this many toggles the parallel scan runs on one thread.
inline constexpr std::size_t kParallelScanThreshold = 256;

void compute_deltas_serial(const ProcessSpec& spec, const Graph& g, std::span<const Toggle> toggles,
                           DeltaCache& out);
void compute_deltas(const ProcessSpec& spec, const Graph& g, std::span<const Toggle> toggles,
                    DeltaCache& out);

/// Recompute the change scores of the listed toggle indices only.
void update_deltas(const ProcessSpec& spec, const Graph& g, std::span<const Toggle> toggles,
                   std::span<const std::size_t> indices, DeltaCache& cache);

RateInputs inputs_at(const ProcessSpec& spec, const Graph& g, const DeltaCache& cache, std::size_t k,
                     double source);

void scan_rates_serial(const ProcessSpec& spec, const Graph& g, std::span<const Toggle> toggles,
                       std::span<double> out);
void scan_rates(const ProcessSpec& spec, const Graph& g, std::span<const Toggle> toggles,
                std::span<double> out);

/// Full generator over the enumerated space; row a holds R_{a, a xor 2^k}.
RateMatrix assemble_rate_matrix_serial(const ProcessSpec& spec, const StateSpace& space);
RateMatrix assemble_rate_matrix(const ProcessSpec& spec, const StateSpace& space);

int max_threads();
void set_threads(int n);

}  // namespace ergmk::kernels
