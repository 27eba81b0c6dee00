#pragma once

#include <cstdint>
#include <functional>

namespace maxharm {

/// Set the worker count used by parallel_for. 0 selects hardware concurrency.
void set_thread_count(int threads);
int thread_count();

/// Run fn(i) for i in [0, n). Work is split into contiguous chunks, one per
/// worker; every index is processed by exactly one worker and fn must only
/// write to slots owned by its index, so results do not depend on the worker
/// count.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

}  // namespace maxharm
