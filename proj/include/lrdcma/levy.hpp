#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lrdcma/rng.hpp"

namespace lrdcma {

/**
 * @brief Driving Levy process: Brownian part plus compound Poisson with symmetric Pareto jumps.
 *
 * Jumps satisfy P[|J| > y] = min(1, (y/x0)^-alpha) with a fair random sign. With
 * `bounded_jumps` the jump law is conditioned on |J| <= 10*x0, which gives all moments.
 * The drift is zero, so E[L_1] = 0.
 */
struct LevyModel {
    double brownian_sd = 0.0;
    double jump_rate = 0.0;
    double alpha = 2.5;
    double x0 = 1.0;
    bool bounded_jumps = false;

    void validate() const;
    [[nodiscard]] bool has_jumps() const noexcept { return jump_rate > 0.0; }
    [[nodiscard]] bool pure_brownian() const noexcept { return !has_jumps() && brownian_sd > 0.0; }
    [[nodiscard]] double jump_cap() const noexcept;
};

[[nodiscard]] LevyModel brownian(double sd = 1.0);
[[nodiscard]] LevyModel pareto_jumps(double rate, double alpha, double x0 = 1.0, bool bounded = false);

// E[|J|^k]; +inf when the moment diverges.
[[nodiscard]] double jump_abs_moment(const LevyModel& model, double k);
// P[J > u] for u >= 0 (one side only, so at most 1/2).
[[nodiscard]] double jump_upper_tail(const LevyModel& model, double u);
// E[J^k 1{J > u}] for u >= 0 and k in {1, 2}.
[[nodiscard]] double jump_upper_moment(const LevyModel& model, int k, double u);

[[nodiscard]] double variance(const LevyModel& model);

struct FourthMoment {
    bool finite = true;
    double value = 0.0;   // E[L_1^4]
    double kappa4 = 0.0;  // fourth cumulant, lambda * E[J^4]
    double eta = 3.0;     // E[L_1^4] / sigma^4
};
[[nodiscard]] FourthMoment fourth_moment(const LevyModel& model);

/**
 * @brief n i.i.d. increments of L over steps of length dt.
 * @throws ParameterError if dt <= 0 or n == 0.
 */
[[nodiscard]] std::vector<double> sample_increments(const LevyModel& model, double dt, std::size_t n,
                                                    std::uint64_t seed);

// In-place variant used by the simulators; consumes draws from `rng`.
void fill_increments(const LevyModel& model, double dt, std::span<double> out, Rng& rng);

/**
 * @brief One increment of L over a long interval of length `width`.
 *
 * Exact when the expected jump count is small. Otherwise jumps above a threshold
 * (about 16 expected) are drawn exactly and the remaining small jumps are replaced
 * by a Gaussian with matching variance.
 */
[[nodiscard]] double sample_aggregate(const LevyModel& model, double width, Rng& rng);

struct TailEstimate {
    double probability = 0.0;
    double std_error = 0.0;
    double asymptote = 0.0;  // lambda*dt*(y/x0)^-alpha, or the Gaussian tail for Brownian models
};

/**
 * @brief Monte Carlo estimate of P[|L_dt| > y].
 *
 * The jump with the largest modulus is integrated out analytically (conditional
 * Monte Carlo), which keeps the relative error bounded far into the tail.
 */
[[nodiscard]] TailEstimate tail_probability(const LevyModel& model, double y, std::size_t sample_budget,
                                            std::uint64_t seed, double dt = 1.0);

struct NormingA {
    long long N = 0;
    double a_mc = 0.0;
    double a_asym = 0.0;
    double rel_std_error = 0.0;  // relative standard error of the tail estimate at a_mc
};

/**
 * @brief a_N = inf{y : P[|L_dt| > y] < 1/N} by bisection on the Monte Carlo tail.
 * @throws NumericError when the tail estimate at a_N is too noisy to resolve (relative SE > 10%).
 */
[[nodiscard]] NormingA norming_a(const LevyModel& model, long long N, std::size_t sample_budget,
                                 std::uint64_t seed, double dt = 1.0);

struct NormingB {
    double b_N = 0.0;
    double std_error = 0.0;
    double karamata = 0.0;  // (N / a_N^2) (sigma^2 - b_N); zero when a_N = 0
};

// b_N = E[L_dt^2 1{|L_dt| <= a_N}].
[[nodiscard]] NormingB norming_b(const LevyModel& model, double a_N, long long N, std::size_t sample_budget,
                                 std::uint64_t seed, double dt = 1.0);

}  // namespace lrdcma
