#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace qkdrates {

// Worker count used by every parallel loop in the library.  Zero selects the
// hardware concurrency.  Results never depend on this value: work is split
// into fixed items whose partial results are combined in index order.
void set_thread_count(unsigned n);
unsigned thread_count();

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Sum by recursive halving, so the rounding pattern depends only on the input.
double pairwise_sum(std::span<const double> values);

}  // namespace qkdrates
