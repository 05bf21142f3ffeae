#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace twistlab {

inline unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Results land in index order, so the
// output never depends on scheduling. The first exception (by index) is rethrown.
template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn, unsigned jobs = 0) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned nt = std::min<unsigned>(jobs ? jobs : default_jobs(), unsigned(std::max<std::size_t>(n, 1)));
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < nt; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace twistlab
