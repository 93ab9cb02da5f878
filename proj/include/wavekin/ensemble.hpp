#pragma once

#include <functional>
#include <vector>

namespace wavekin {

// Runs `task(index)` for index = 0..n-1 across `workers` threads and returns
// the results ordered by index. Tasks must derive all randomness from their
// index (counter-seeded streams), so the result vector -- and any reduction
// over it in index order -- is identical for any worker count.
std::vector<std::vector<double>> run_indexed(long n, int workers,
                                             const std::function<std::vector<double>(long)>& task);

}  // namespace wavekin
