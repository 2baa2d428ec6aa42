#pragma once

#include <cstddef>
#include <functional>

namespace corrdyn {

// Worker count used by parallel_for: set_thread_count() wins, then the
// CORRDYN_THREADS environment variable, then hardware concurrency.
std::size_t thread_count();
void set_thread_count(std::size_t n);  // 0 restores automatic selection

// Runs fn(i) for every i in [0, n), split into contiguous chunks across
// workers. fn must only touch state owned by index i; merged outputs are then
// independent of scheduling. Nested calls degrade to serial execution.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace corrdyn
