#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace spinmono {

/// Environment variable overriding the worker count.
inline constexpr const char* kWorkersEnv = "SPINMONO_WORKERS";

/// `requested` if non-zero, else $SPINMONO_WORKERS if set and positive, else
/// the hardware concurrency (at least 1).
inline unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv(kWorkersEnv)) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(replica, acc) for replica in [0, replicas) over contiguous
/// blocks, one accumulator per worker, then folds the accumulators with
/// operator+= in block order. With integer-valued accumulators the result
/// does not depend on the worker count.
template <class Acc, class Fn>
Acc reduce_replicas(std::uint64_t replicas, unsigned workers, const Acc& zero, Fn&& fn) {
  workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, std::max<std::uint64_t>(replicas, 1)));
  std::vector<Acc> partial(workers, zero);
  std::vector<std::exception_ptr> errors(workers);
  auto run_block = [&](unsigned w) {
    const std::uint64_t begin = replicas * w / workers;
    const std::uint64_t end = replicas * (w + 1) / workers;
    try {
      for (std::uint64_t r = begin; r < end; ++r) fn(r, partial[w]);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    run_block(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run_block, w);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  Acc total = zero;
  for (auto& p : partial) total += p;
  return total;
}

}  // namespace spinmono
