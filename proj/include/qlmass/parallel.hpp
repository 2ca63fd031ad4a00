#pragma once

#include <cstddef>
#include <functional>

namespace qlmass {

// Worker count: QLMASS_THREADS if set to a positive integer, else the
// hardware concurrency.
std::size_t thread_count();

// Runs body(i) for i in [0, n) on up to thread_count() threads. Every index
// runs; the exception from the lowest failing index is rethrown at the end.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace qlmass
