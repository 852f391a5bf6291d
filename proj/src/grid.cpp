// SPDX-License-Identifier: Apache-2.0

#include "pindex/grid.hpp"

#include <cmath>
#include <string>

#include "pindex/error.hpp"

namespace pindex {

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) fail(ErrorKind::InvalidInput, "log_grid needs 0 < lo < hi");
  if (points < 2) fail(ErrorKind::InvalidInput, "log_grid needs at least two points");
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    g[i] = std::pow(10.0, a + (b - a) * t);
  }
  // pin the endpoints
  g.front() = lo;
  g.back() = hi;
  return g;
}

void require_ascending_grid(std::span<const double> grid, const char *what) {
  if (grid.empty()) fail(ErrorKind::InvalidInput, std::string(what) + " is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i]))
      fail(ErrorKind::InvalidInput, std::string(what) + " must be positive and finite");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      fail(ErrorKind::InvalidInput, std::string(what) + " must be strictly ascending");
  }
}

}  // namespace pindex
