#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lrdcma/kernel.hpp"
#include "lrdcma/levy.hpp"
#include "lrdcma/limits.hpp"
#include "lrdcma/mc.hpp"
#include "lrdcma/simulate.hpp"

namespace lrdcma {

enum class LimitKind { rosenblatt, stable, gdm };

[[nodiscard]] std::string to_string(LimitKind k);
[[nodiscard]] LimitKind limit_kind_from_string(const std::string& s);

struct LimitConfig {
    LimitKind law = LimitKind::rosenblatt;
    std::optional<double> d;  // Rosenblatt memory; defaults to kernel.d
    RosenblattOptions rosenblatt;
    long gdm_grid = 512;
    long lag = 0;          // G_h of the gdm law
    double epsilon = 1.0;  // stable law of K_epsilon
};

/**
 * @brief Everything one config file describes.
 *
 * `experiment` carries its own copies of kernel, model, grid and seed, kept in sync by
 * the parser. `sweep_N` lists the N values of `experiment sweep`.
 */
struct RunConfig {
    KernelSpec kernel;
    LevyModel model = brownian(1.0);
    SimulationGrid grid;
    LimitConfig limit;
    ExperimentConfig experiment;
    std::vector<long> sweep_N;
    std::uint64_t seed = 1;
    std::string hash;  // FNV-1a 64 of canonical_text(), hex

    // key = value lines for every semantic key, sorted; run.seed is excluded.
    [[nodiscard]] std::string canonical_text() const;
    void set_seed(std::uint64_t s);
};

// All recognised keys, sorted.
[[nodiscard]] const std::vector<std::string>& config_keys();

/**
 * @brief Parses and jointly validates a flat `key = value` config.
 *
 * Blank lines and `#` comments are ignored. Every problem found (unknown or duplicate
 * keys, unparsable values, invalid kernel, model or grid, boundary regime without
 * experiment.override_boundary) is collected before throwing.
 * @throws ConfigError listing all problems.
 */
[[nodiscard]] RunConfig parse_config_text(const std::string& text);
[[nodiscard]] RunConfig parse_config(const std::string& path);

[[nodiscard]] std::uint64_t fnv1a64(const std::string& s) noexcept;

}  // namespace lrdcma
