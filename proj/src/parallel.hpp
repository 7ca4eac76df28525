#pragma once

#include "anisofrac/core.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace anisofrac::detail {

/// Runs body(i) for i in [0, count). Each index is handled by exactly one
/// thread and writes only its own output, so serial and parallel runs agree bitwise.
template <typename Body>
void for_each_index(int count, Execution execution, Body&& body) {
  unsigned threads = execution == Execution::Parallel ? std::max(1u, std::thread::hardware_concurrency()) : 1u;
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(count, 1)));
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = static_cast<int>(t); i < count; i += static_cast<int>(threads)) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace anisofrac::detail
