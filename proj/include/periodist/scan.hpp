#pragma once

// Shell-partitioned window scans.
//
// Work is split by shell |n|_1 = r. Each shell produces one partial result
// and partials are merged in increasing r, so the outcome does not depend on
// the number of workers.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace periodist {

namespace detail {
inline std::atomic<unsigned>& worker_cap() {
  static std::atomic<unsigned> cap{1};
  return cap;
}
}  // namespace detail

/// Caps the number of worker threads used by window scans (>= 1).
inline void set_max_workers(unsigned n) { detail::worker_cap().store(n == 0 ? 1 : n); }
inline unsigned max_workers() { return detail::worker_cap().load(); }

/// Runs shell_fn(r) for r = 0..R and returns the results indexed by r.
/// If any shell throws, the exception of the lowest such shell is rethrown.
template <class T, class ShellFn>
std::vector<T> map_shells(std::int64_t R, ShellFn&& shell_fn) {
  if (R < 0) return {};
  const auto count = static_cast<std::size_t>(R + 1);
  std::vector<T> out(count);
  std::vector<std::exception_ptr> errors(count);
  auto run = [&](std::size_t r) {
    try {
      out[r] = shell_fn(static_cast<std::int64_t>(r));
    } catch (...) {
      errors[r] = std::current_exception();
    }
  };
  const unsigned workers = std::min<unsigned>(max_workers(), static_cast<unsigned>(count));
  if (workers <= 1) {
    for (std::size_t r = 0; r < count; ++r) {
      run(r);
      if (errors[r]) break;
    }
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t r = w; r < count; r += workers) run(r);
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

/// Returns the answer of the lowest shell r <= R for which shell_fn(r)
/// returns a value. Shells above an already-found one are skipped.
template <class T, class ShellFn>
std::optional<T> find_first_shell(std::int64_t R, ShellFn&& shell_fn) {
  if (R < 0) return std::nullopt;
  std::atomic<std::int64_t> best{R + 1};
  auto results = map_shells<std::optional<T>>(R, [&](std::int64_t r) -> std::optional<T> {
    if (r > best.load()) return std::nullopt;
    auto found = shell_fn(r);
    if (found) {
      std::int64_t cur = best.load();
      while (r < cur && !best.compare_exchange_weak(cur, r)) {
      }
    }
    return found;
  });
  for (auto& v : results)
    if (v) return v;
  return std::nullopt;
}

}  // namespace periodist
