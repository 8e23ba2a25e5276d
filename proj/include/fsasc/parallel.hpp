#pragma once

#include <cstddef>
#include <functional>

namespace fsasc {

/// Upper bound on worker threads used by `parallel_for`. 0 (the default)
/// means std::thread::hardware_concurrency().
void set_worker_count(unsigned workers);
unsigned worker_count();

/// Calls body(i) for every i in [0, count), possibly concurrently. Calls made
/// from inside a running body execute sequentially on the calling thread.
/// The first exception thrown by any body is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace fsasc
