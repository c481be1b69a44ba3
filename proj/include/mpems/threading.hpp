#pragma once

#include <cstddef>
#include <functional>

namespace mpems {

// Runs fn(i) for i in [0, n), split into contiguous chunks over `threads`
// workers; blocks until done. threads <= 1 runs inline. fn must be safe to
// call concurrently for distinct i.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

} // namespace mpems
