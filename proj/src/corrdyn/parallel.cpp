#include "corrdyn/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace corrdyn {

namespace {

std::atomic<std::size_t> g_thread_override{0};
thread_local bool t_inside_parallel = false;

std::size_t env_thread_count() {
  if (const char* env = std::getenv("CORRDYN_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return 0;
}

}  // namespace

std::size_t thread_count() {
  if (std::size_t n = g_thread_override.load(std::memory_order_relaxed); n > 0) return n;
  if (std::size_t n = env_thread_count(); n > 0) return n;
  std::size_t hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

void set_thread_count(std::size_t n) { g_thread_override.store(n, std::memory_order_relaxed); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = thread_count();
  if (n == 0) return;
  if (workers <= 1 || n < 2 * workers || t_inside_parallel) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  const std::size_t used = workers < n ? workers : n;
  std::vector<std::thread> pool;
  pool.reserve(used);
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto run_chunk = [&](std::size_t begin, std::size_t end) {
    t_inside_parallel = true;
    try {
      for (std::size_t i = begin; i < end && !failed.load(std::memory_order_relaxed); ++i) fn(i);
    } catch (...) {
      std::scoped_lock lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
      failed.store(true, std::memory_order_relaxed);
    }
    t_inside_parallel = false;
  };

  const std::size_t chunk = (n + used - 1) / used;
  for (std::size_t w = 0; w < used; ++w) {
    std::size_t begin = w * chunk;
    std::size_t end = begin + chunk < n ? begin + chunk : n;
    if (begin >= end) break;
    pool.emplace_back(run_chunk, begin, end);
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace corrdyn
