// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace pindex {

/// Provenance carried by every curve and serialized next to it.
struct CurveMetadata {
  std::string method;  // "method1" or "method2"
  std::string source;
  std::string regime = "none";
  std::optional<double> h;
  double scale = 1.0;
  std::uint64_t seed = 0;
  std::string kappaVEstimator = "cond(unit-column eigenvector matrix)";
  std::map<std::string, std::string> notes;
};

}  // namespace pindex
