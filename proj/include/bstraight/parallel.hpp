#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <string>

#ifdef BSTRAIGHT_HAVE_OPENMP
#include <omp.h>
#endif

namespace bstraight {

// Worker cap: min(BSTRAIGHT_THREADS, omp_get_max_threads()).  Scan results
// must not depend on this value; tests compare parallel runs against the
// serial reference.
inline int effective_threads() {
#ifdef BSTRAIGHT_HAVE_OPENMP
  int n = omp_get_max_threads();
#else
  int n = 1;
#endif
  if (const char* env = std::getenv("BSTRAIGHT_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) n = std::min<long>(n, cap);
  }
  return std::max(1, n);
}

// Runs fn(i) for i in [0, count).  Each index writes only to its own slot of
// whatever the caller allocated, so the parallel run is byte-identical to the
// serial reference.  Exceptions are captured and rethrown after the join.
template <typename Fn>
void for_each_index(std::ptrdiff_t count, bool parallel, Fn&& fn) {
  if (!parallel) {
    for (std::ptrdiff_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
#ifdef BSTRAIGHT_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(effective_threads())
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
#else
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      fn(i);
    } catch (...) {
      if (!error) error = std::current_exception();
    }
  }
#endif
  if (error) std::rethrow_exception(error);
}

}  // namespace bstraight
