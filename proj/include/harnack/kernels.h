#pragma once

// Replicate-parallel Monte Carlo driver. Every replicate i writes only its
// own output slot and draws from its own RngStream(seed, i), so the OpenMP
// and serial paths produce bitwise-identical slot contents; reductions are
// done afterwards in index order.

#include <cstdint>
#include <exception>
#include <mutex>

#include <omp.h>

namespace harnack {

enum class ExecPolicy { kSerial, kParallel };

/// Serial reference: fn(0), fn(1), ..., fn(n-1).
template <class Fn>
void for_each_replicate_serial(std::int64_t n, Fn&& fn) {
  for (std::int64_t i = 0; i < n; ++i) fn(i);
}

/// OpenMP version. The first exception thrown by any replicate is rethrown
/// on the calling thread once the loop has drained.
template <class Fn>
void for_each_replicate_parallel(std::int64_t n, Fn&& fn) {
  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

template <class Fn>
void for_each_replicate(std::int64_t n, Fn&& fn, ExecPolicy policy = ExecPolicy::kParallel) {
  if (policy == ExecPolicy::kSerial) {
    for_each_replicate_serial(n, fn);
  } else {
    for_each_replicate_parallel(n, fn);
  }
}

}  // namespace harnack
