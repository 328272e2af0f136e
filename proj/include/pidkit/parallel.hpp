#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>

namespace pidkit {

/// Deterministic sub-seed for a work unit identified by a path of indices
/// below a master seed. Independent of scheduling and worker count.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

/// 0 means one worker per hardware thread.
unsigned resolve_workers(unsigned requested);

/// Runs fn(0) ... fn(n_units - 1) on up to `workers` threads. Units must
/// write only to their own output slots. The first exception thrown by any
/// unit is rethrown after all threads join.
void parallel_for(std::size_t n_units, unsigned workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace pidkit
