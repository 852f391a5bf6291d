// SPDX-License-Identifier: Apache-2.0

#include "pindex/random.hpp"

#include <cstdlib>
#include <string>

namespace pindex {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

CounterRng::CounterRng(StreamKey key)
    : key_(splitmix64(splitmix64(key.seed) ^ (key.stream * 0xd1b54a32d192ed03ULL))) {}

CounterRng::result_type CounterRng::operator()() {
  // Two rounds keep consecutive counters decorrelated.
  return splitmix64(splitmix64(key_ + counter_++) ^ key_);
}

std::uint64_t default_seed(std::uint64_t fallback) {
  const char *env = std::getenv("PINDEX_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used, 0);
    if (used != std::string(env).size()) return fallback;
    return v;
  } catch (...) {
    return fallback;
  }
}

}  // namespace pindex
