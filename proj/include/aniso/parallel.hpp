#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace aniso {

/// Caps the number of worker threads used by the row-parallel loops (default 1).
void set_thread_count(int n);
int thread_count();

/// Runs body(row) for row in [0, n). Rows are split into contiguous blocks;
/// every row is processed exactly once, so per-row results do not depend on
/// the thread count.
void parallel_rows(int n, const std::function<void(int)>& body);

/// Sums per-row partial values in row order.
double ordered_sum(const std::vector<double>& partials);

}  // namespace aniso
