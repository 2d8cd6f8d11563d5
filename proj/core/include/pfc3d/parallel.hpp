#pragma once

#include <functional>

namespace pfc3d {

/// Number of worker threads used by cell loops. Defaults to 1.
int num_threads();
void set_num_threads(int n);

/// Runs body(begin, end) over a static partition of [0, n). The partition
/// depends only on n and num_threads(), so results are reproducible for a
/// fixed thread count.
void parallel_for(int n, const std::function<void(int, int)>& body);

}  // namespace pfc3d
