#pragma once

#include <cstdint>
#include <random>

namespace vcoop {

using Stream = std::mt19937_64;

// Component tags mixed into derived seeds.
enum class Component : std::uint64_t {
  SampledCycle = 1,
  EventHelpers = 2,
  Mobility = 3,
  Shadowing = 4,
  Fading = 5,
  LpCheck = 6,
};

std::uint64_t splitmix64(std::uint64_t x);

/// seed = mix(mix(mix(master) ^ replication) ^ component), with mix the
/// splitmix64 finalizer. Independent of execution order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replication, Component component);

/// Key for a (seed, a, b) triple, used to address counter-based draws.
std::uint64_t hash_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// Uniform in (0, 1) addressed by (key, counter).
double counter_uniform(std::uint64_t key, std::uint64_t counter);

/// Standard normal addressed by (key, counter), Box-Muller on two counter
/// uniforms.
double counter_normal(std::uint64_t key, std::uint64_t counter);

}  // namespace vcoop
