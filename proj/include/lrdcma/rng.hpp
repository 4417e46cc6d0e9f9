#pragma once

#include <cstdint>
#include <random>

namespace lrdcma {

using Rng = std::mt19937_64;

// splitmix64 finalizer; a bijection on 64-bit words.
[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;

/**
 * @brief Seed for an independent stream of task `task` under master seed `seed`.
 *
 * Defined as splitmix64(splitmix64(seed) ^ splitmix64(task + 0x9E3779B97F4A7C15)).
 * The result depends only on (seed, task), so parallel runs are reproducible
 * regardless of how tasks are scheduled.
 */
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t task) noexcept;

[[nodiscard]] inline Rng make_rng(std::uint64_t seed, std::uint64_t task) {
    return Rng(derive_seed(seed, task));
}

}  // namespace lrdcma
