#pragma once

// Deterministic Monte Carlo replicate runner.
//
// Every replicate k draws from Xoshiro256pp::for_stream(seed, k) and writes
// its result into slot k of a pre-allocated buffer; reductions walk the
// buffer in index order. The OpenMP path and the serial reference therefore
// produce bit-identical buffers and moments for any worker count.

#include <cstdint>
#include <span>
#include <type_traits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mmlab/error.hpp"
#include "mmlab/rng.hpp"

namespace mmlab {

enum class Execution { Serial, Parallel };

struct McOptions {
  std::int64_t replicates = 100000;
  std::uint64_t seed = 20090101;
  Execution execution = Execution::Parallel;
  int threads = 0;  // 0: OpenMP default
};

struct SampleMoments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased; 0 for a single sample
  std::int64_t count = 0;

  double std_error() const;
};

/// Two-pass moments, summed in index order.
SampleMoments moments(std::span<const double> values);

/// Serial reference: slot k <- draw(stream k).
template <class T, class Draw>
void fill_replicates_serial(std::span<T> out, std::uint64_t seed, Draw&& draw) {
  const auto count = static_cast<std::int64_t>(out.size());
  for (std::int64_t k = 0; k < count; ++k) {
    auto rng = Xoshiro256pp::for_stream(seed, static_cast<std::uint64_t>(k));
    out[static_cast<std::size_t>(k)] = draw(rng);
  }
}

/// OpenMP kernel: same contract as the serial reference.
template <class T, class Draw>
void fill_replicates_parallel(std::span<T> out, std::uint64_t seed, int threads, Draw&& draw) {
  const auto count = static_cast<std::int64_t>(out.size());
#ifdef _OPENMP
  const int workers = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(workers)
#endif
  for (std::int64_t k = 0; k < count; ++k) {
    auto rng = Xoshiro256pp::for_stream(seed, static_cast<std::uint64_t>(k));
    out[static_cast<std::size_t>(k)] = draw(rng);
  }
  (void)threads;
}

/// Runs opts.replicates draws; the slot type is whatever `draw` returns.
template <class Draw>
auto run_replicates(const McOptions& opts, Draw&& draw) {
  using T = std::invoke_result_t<Draw&, Xoshiro256pp&>;
  require(opts.replicates >= 1, "replicates must be >= 1");
  std::vector<T> out(static_cast<std::size_t>(opts.replicates));
  if (opts.execution == Execution::Serial) {
    fill_replicates_serial(std::span<T>(out), opts.seed, draw);
  } else {
    fill_replicates_parallel(std::span<T>(out), opts.seed, opts.threads, draw);
  }
  return out;
}

}  // namespace mmlab
