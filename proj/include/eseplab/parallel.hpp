#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace eseplab {

// ESEPLAB_THREADS if set, else hardware concurrency (at least 1).
int default_threads();

// Runs body(i) for i in [0, count) on up to `threads` workers.
// The first exception thrown by any body is rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

template <class T, class F>
std::vector<T> replicate(std::size_t count, int threads, F&& fn) {
  std::vector<T> out(count);
  parallel_for(count, threads, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace eseplab
