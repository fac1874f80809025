#pragma once

#include <exception>
#include <vector>

namespace lmn {

/// Runs fn(i) for i in [0, n), optionally with OpenMP. Each index writes only
/// its own output, so results do not depend on the thread count. The exception
/// raised at the lowest index, if any, is rethrown after the loop.
template <class Fn>
void parallel_for(int n, bool parallel, Fn&& fn) {
  std::exception_ptr first;
  int first_index = n;
#pragma omp parallel for schedule(static) if (parallel)
  for (int i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical(lmn_parallel_for)
      if (i < first_index) {
        first_index = i;
        first = std::current_exception();
      }
    }
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace lmn
