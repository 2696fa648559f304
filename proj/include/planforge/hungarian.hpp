#pragma once

#include <vector>

namespace planforge::metrics {

/// Minimum-cost one-to-one assignment of rows to columns for a dense cost
/// matrix (rows x cols, row-major). All items on the smaller side are
/// assigned. Returns per-row column index, or -1 for unassigned rows.
std::vector<int> hungarian_assign(const std::vector<double>& cost, int rows, int cols);

}  // namespace planforge::metrics
