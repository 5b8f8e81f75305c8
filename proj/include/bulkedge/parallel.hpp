#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <type_traits>
#include <vector>

namespace bulkedge {

// Worker count used by parallel_map; 1 means run inline.
void set_jobs(int jobs);
int jobs();

namespace detail {
bool& inside_worker();
}

// Evaluates f(0..n-1) and returns results in index order. Each index is
// computed by exactly one worker, so results do not depend on scheduling.
// Nested calls run serially on the calling worker.
template <class F>
auto parallel_map(std::size_t n, F&& f) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<R> out(n);
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs()), n);
  if (workers <= 1 || detail::inside_worker()) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(n);
  auto run = [&](std::size_t w) {
    detail::inside_worker() = true;
    for (std::size_t i = w; i < n; i += workers) {
      try {
        out[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    detail::inside_worker() = false;
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace bulkedge
