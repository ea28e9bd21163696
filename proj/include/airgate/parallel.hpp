#pragma once

#include <cstddef>
#include <functional>

namespace airgate {

/// Worker count used by parallel_for. 0 (the default) means one per hardware thread.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Calls fn(i) for every i in [0, n). Each index must write only its own output
/// slot; results are then independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace airgate
