// Random streams and per-trial seed derivation.

#ifndef BB_RNG_HPP
#define BB_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace bb {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// 64-bit FNV-1a; stable across platforms, unlike std::hash.
constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seed of one trial, a stable function of (master seed, policy id, budget,
/// trial index). Trials seeded this way are independent of execution order.
constexpr std::uint64_t trial_seed(std::uint64_t master_seed, std::string_view policy_id,
                                   std::int64_t budget, std::int64_t trial_index) {
  std::uint64_t h = mix64(master_seed);
  h = mix64(h ^ fnv1a(policy_id));
  h = mix64(h ^ static_cast<std::uint64_t>(budget));
  h = mix64(h ^ static_cast<std::uint64_t>(trial_index));
  return h;
}

}  // namespace bb

#endif  // BB_RNG_HPP
