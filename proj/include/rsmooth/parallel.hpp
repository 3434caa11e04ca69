#pragma once

#include <cstdint>

namespace rsmooth {

// Execution mode for the data-parallel kernels (MC walk batches,
// certification sampling, sweep grids). The serial path is the reference
// implementation; results must match the parallel path bit for bit, which
// the counter-based RNG splits make possible regardless of scheduling.
enum class ExecMode { serial, parallel };

template <class F>
void parallel_for(std::int64_t n, ExecMode mode, F&& body) {
#ifdef RSMOOTH_HAVE_OPENMP
  if (mode == ExecMode::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
#else
  (void)mode;
#endif
  for (std::int64_t i = 0; i < n; ++i) body(i);
}

}  // namespace rsmooth
