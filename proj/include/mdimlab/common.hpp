#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace mdimlab {

// Breakpoint / endpoint matching tolerance used by the interval-map validators.
inline constexpr double kGeomTol = 1e-12;

// Default cap on the number of affine pieces a symbolic composition may produce.
inline constexpr std::size_t kDefaultBranchCap = 10'000'000;

// Caps for the exact combinatorial counters (branch-and-bound stays subsecond).
inline constexpr std::size_t kExactSeparatedCap = 30;
inline constexpr std::size_t kExactSpanningCap = 25;
inline constexpr std::size_t kExactCoverCap = 20;

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StructureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientDepthError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thread cap for embarrassingly parallel count tables. MDIMLAB_THREADS
// overrides hardware concurrency; any value below 1 means sequential.
inline unsigned thread_cap() {
  if (const char* env = std::getenv("MDIMLAB_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
    return 1;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Runs f(i) for i in [0, count). Work items must be independent and write to
// disjoint slots so the result is identical to the sequential order.
template <class F>
void parallel_for(std::size_t count, F&& f) {
  unsigned threads = thread_cap();
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  if (threads > count) threads = static_cast<unsigned>(count);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += threads) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace mdimlab
