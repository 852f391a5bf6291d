// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace pindex {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

/// `points` log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t points);

/// Throws InvalidInput unless the grid is nonempty, positive and strictly ascending.
void require_ascending_grid(std::span<const double> grid, const char *what);

}  // namespace pindex
