#pragma once

#include <cstddef>
#include <functional>

namespace fspec {

/// Worker cap: FRACTAL_SPECTRA_THREADS if set to a positive integer, else the
/// hardware concurrency (at least 1).
std::size_t thread_cap();

/// Runs body(i) for i in [0, count), statically partitioned over at most
/// thread_cap() threads. Each index must be independent of the others.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace fspec
