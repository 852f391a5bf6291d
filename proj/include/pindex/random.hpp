// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>

namespace pindex {

/// Identifies one independent random stream: a user seed plus a stream index.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// Counter-based generator: the i-th output is a keyed hash of i, so a stream
/// is a pure function of its key and parallel consumers never share state.
class CounterRng {
public:
  using result_type = std::uint64_t;

  explicit CounterRng(StreamKey key);
  CounterRng(std::uint64_t seed, std::uint64_t stream) : CounterRng(StreamKey{seed, stream}) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Seed from PINDEX_SEED when set and parseable, `fallback` otherwise.
std::uint64_t default_seed(std::uint64_t fallback = 0);

}  // namespace pindex
