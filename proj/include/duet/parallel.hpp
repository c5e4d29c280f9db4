#pragma once

#include <cstddef>
#include <cstdint>

#ifdef DUET_HAVE_OPENMP
#include <omp.h>
#endif

namespace duet {

/// Execution policy for the frame-parallel kernels. Every parallel kernel has
/// a serial twin that serves as the reference implementation in tests; both
/// write per-index output slots, so results are bitwise identical.
enum class Exec { Serial, Parallel };

template <class F>
void for_each_index(std::size_t n, Exec exec, F&& fn) {
#ifdef DUET_HAVE_OPENMP
  if (exec == Exec::Parallel) {
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
    return;
  }
#else
  (void)exec;
#endif
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace duet
