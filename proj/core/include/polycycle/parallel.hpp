#pragma once

#include <cstddef>
#include <functional>

namespace polycycle {

// Worker count from POLYCYCLE_LAB_THREADS (unset or 0 = hardware concurrency).
std::size_t worker_count();

// Calls body(i) for every i in [0, count). Each index must write only its own
// output slot; the result is then independent of the schedule. The first
// exception thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace polycycle
