#pragma once

#include <cstddef>
#include <functional>

namespace lc {

// Worker cap: LATTICE_CALDERON_THREADS if set to a positive integer, else hardware concurrency.
int worker_count();

// Runs body(i) for i in [0, n) on up to worker_count() threads; body must be safe to run concurrently.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lc
