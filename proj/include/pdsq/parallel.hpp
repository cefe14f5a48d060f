#pragma once

#include <cstddef>
#include <functional>

namespace pdsq {

/// Worker count: hardware concurrency, capped by the PDSQ_THREADS environment variable.
unsigned worker_count();

/// Runs body(i) for i in [0, count). Tasks are handed to a fixed pool of workers;
/// callers must write results into slot i so the outcome is independent of scheduling.
/// The first exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Splits [0, total) into chunks of `chunk` elements (the last may be short).
inline std::size_t chunk_count(std::size_t total, std::size_t chunk) {
  return (total + chunk - 1) / chunk;
}

}  // namespace pdsq
