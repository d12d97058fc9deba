#pragma once

#include <cstddef>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace mqg {

// Run fn(0..count-1), optionally across OpenMP threads.  Tasks must be
// independent and write only to their own slots; results are then read back
// in index order, so serial and parallel runs produce identical output.
template <typename Fn>
void run_indexed_tasks(std::size_t count, Fn&& fn, bool parallel) {
#if defined(_OPENMP)
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(count); ++i)
            fn(static_cast<std::size_t>(i));
        return;
    }
#else
    (void)parallel;
#endif
    for (std::size_t i = 0; i < count; ++i) fn(i);
}

inline int max_threads() {
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace mqg
