#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace bbgky {

// Worker cap; initialised from BBGKY_LAB_THREADS (default 1).
int worker_count();
void set_worker_count(int n);

// Evaluates fn(0..n-1) and returns the results in index order, so any
// reduction over them is independent of the number of workers. Nested
// calls from inside a worker run serially.
template <class T>
std::vector<T> ordered_map(std::size_t n, const std::function<T(std::size_t)>& fn);

namespace detail {
void run_indexed(std::size_t n, const std::function<void(std::size_t)>& body);
}

template <class T>
std::vector<T> ordered_map(std::size_t n, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(n);
  detail::run_indexed(n, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace bbgky
