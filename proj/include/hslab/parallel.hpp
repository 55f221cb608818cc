#pragma once

#include <functional>

namespace hslab {

// Worker count: HS_LAB_THREADS when set to a positive integer, else the hardware concurrency.
int worker_count();

// Calls fn(i) for i in [0, count); each index is handled by exactly one worker.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace hslab
