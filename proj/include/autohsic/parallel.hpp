#ifndef AUTOHSIC_PARALLEL_HPP
#define AUTOHSIC_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace autohsic {

/// Runs fn(i) for i in [0, n) on up to `threads` workers with a static block
/// partition. Results must be written to disjoint, index-addressed slots so
/// the outcome is independent of the schedule. threads <= 1 runs serially;
/// threads == 0 uses the hardware concurrency. The first exception thrown by
/// any worker is rethrown after all workers join.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

/// Resolves a thread-count hint (0 = hardware concurrency).
int resolve_threads(int hint);

} // namespace autohsic

#endif
