#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ridgekit {

// Worker count taken from RIDGEKIT_THREADS, falling back to the hardware
// concurrency. set_thread_count overrides both (0 restores the default).
unsigned thread_count();
void set_thread_count(unsigned n);

// Runs body(i) for i in [0, n). Every index is processed by exactly one
// worker, so results written per index never depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Pairwise summation with a fixed split, independent of threading.
double pairwise_sum(const double* x, std::size_t n);
double pairwise_sum(const std::vector<double>& x);

}  // namespace ridgekit
