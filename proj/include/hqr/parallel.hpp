#pragma once

#include <cstddef>
#include <functional>

namespace hqr {

/// Worker count used by parallel_for. 0 means hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Calls body(i) for i in [0, n) on the worker pool. Callers write results
/// into slot i, so reductions done afterwards in index order are independent
/// of the thread count. The first exception thrown by any body is rethrown.
/// Calls made from inside a body run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hqr
