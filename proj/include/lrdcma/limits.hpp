#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lrdcma/far_past.hpp"
#include "lrdcma/fft.hpp"
#include "lrdcma/kernel.hpp"
#include "lrdcma/levy.hpp"
#include "lrdcma/rng.hpp"

namespace lrdcma {

/**
 * Coefficient sequence of the Rosenblatt quadratic form. `cell_average` uses
 * a_j = int_{j-1}^{j} x^(d-1) dx, `pure_power` uses a_j = j^(d-1).
 */
enum class RosenblattKernelForm { cell_average, pure_power };

[[nodiscard]] std::string to_string(RosenblattKernelForm f);
[[nodiscard]] RosenblattKernelForm rosenblatt_form_from_string(const std::string& s);

struct RosenblattOptions {
    long n_grid = 1024;
    long window = 0;  // K_w; 0 selects 32 * n_grid
    RosenblattKernelForm form = RosenblattKernelForm::cell_average;
    bool far_past = true;  // Gaussian block aggregation beyond the window
    int horizon = 1;       // observation points t = 1 .. horizon * n_grid; the law is U_d(horizon)
};

// Var U_d(1) = B(d, 1-2d)^2 / (d (4d - 1)) for d in (1/4, 1/2).
[[nodiscard]] double rosenblatt_variance(double d);

/**
 * @brief Draws of n^(-2d) sum_{k != k'} sum_t a_{t-k} a_{t-k'} zeta_k zeta_k', an approximation of U_d(horizon).
 *
 * Computed as n^(-2d) (sum_t Y_t^2 - sum_k A_k zeta_k^2) with Y = a * zeta by FFT.
 * Immutable after construction; draw() may run concurrently.
 */
class RosenblattSampler {
public:
    RosenblattSampler(double d, RosenblattOptions opt = {});
    ~RosenblattSampler();
    RosenblattSampler(const RosenblattSampler&) = delete;
    RosenblattSampler& operator=(const RosenblattSampler&) = delete;

    [[nodiscard]] double draw(Rng& rng) const;
    [[nodiscard]] double draw(std::uint64_t seed, std::uint64_t index) const;
    [[nodiscard]] std::vector<double> draws(std::size_t n, std::uint64_t seed, int threads = 1) const;

    [[nodiscard]] double d() const noexcept { return d_; }
    [[nodiscard]] const RosenblattOptions& options() const noexcept { return opt_; }
    [[nodiscard]] long window() const noexcept { return Kw_; }
    // Relative L2 mass of the coefficients beyond the window, (K_w/n)^(2d-1)/(1-2d); only
    // the far-past residual remains when far_past is on.
    [[nodiscard]] double window_tail_bound() const noexcept { return window_tail_; }
    [[nodiscard]] double far_residual() const noexcept;

private:
    double d_;
    RosenblattOptions opt_;
    long Kw_ = 0;
    long T_ = 0;  // observation count
    double norm_ = 0.0;
    double window_tail_ = 0.0;
    double far_mean_ = 0.0;
    std::vector<double> coef_;  // a_0 = 0, a_1, ...
    std::vector<double> diag_;  // A_k over the window
    std::unique_ptr<FftConvolver> conv_;
    std::unique_ptr<FarPastField> far_;
};

[[nodiscard]] double sample_rosenblatt(double d, long n_grid, std::uint64_t seed);

/**
 * @brief One draw from S_alpha(tau, beta, mu) in the (tau, beta, mu) convention whose
 * characteristic function is exp(-tau^a |t|^a (1 - i beta sign(t) tan(pi a / 2)) + i mu t).
 * @throws ParameterError for alpha outside (0, 2], tau < 0 or |beta| > 1.
 */
[[nodiscard]] double sample_stable(double alpha, double tau, double beta, double mu, Rng& rng);
[[nodiscard]] double sample_stable(double alpha, double tau, double beta, double mu, std::uint64_t seed);

struct StableParams {
    double alpha_half = 0.0;
    double tau = 0.0;
    double beta = 1.0;
    double mu = 0.0;
    double drift = 0.0;  // alpha/(alpha-2), subtracted in M_s = K_s - s * drift
};

// C_p = (1 - p) / (Gamma(2 - p) cos(pi p / 2)).
[[nodiscard]] double stable_constant(double p);

/**
 * @brief Law of K_epsilon for the limit of a_N^-2 sum (L^2 - b_N) over steps of length epsilon.
 *
 * tau = epsilon^(2/alpha) C_p^(-1/p) with p = alpha/2, beta = 1 and mu = epsilon alpha/(alpha-2),
 * which gives M = K - s alpha/(alpha-2) mean zero.
 * @throws ParameterError unless the model is pure-jump, symmetric, with alpha in (2, 4).
 */
[[nodiscard]] StableParams stable_limit_params(const LevyModel& model, double epsilon = 1.0);

struct TauCheck {
    double tau_analytic = 0.0;
    double tau_mc = 0.0;
    double relative_gap = 0.0;
    bool ok = false;  // gap <= 15%
};

// IQR fit of a_N^-2 sum_{i<=N} (L_i^2 - b_N) over `replicates` partial sums against S_p(1, 1, 0).
[[nodiscard]] TauCheck tau_monte_carlo(const LevyModel& model, long long N, std::size_t replicates,
                                       std::uint64_t seed);

/**
 * @brief Riemann-sum draws of int_0^1 G(s) dM_s on n_grid panels.
 *
 * Panel i contributes G(s_i) (dK_i - drift ds) with dK_i ~ S_p(tau ds^(1/p), beta, mu ds).
 */
class GdmSampler {
public:
    GdmSampler(std::vector<double> g_values, StableParams params);
    // G_h of `kernel` at panel midpoints, or the step-kernel G_{m,h} when m > 0.
    static std::vector<double> grid_values(const Kernel& kernel, long h, long n_grid, int m = 0);

    [[nodiscard]] double draw(Rng& rng) const;
    [[nodiscard]] std::vector<double> draws(std::size_t n, std::uint64_t seed, int threads = 1) const;
    [[nodiscard]] const StableParams& params() const noexcept { return p_; }

private:
    std::vector<double> g_;
    StableParams p_;
};

[[nodiscard]] double sample_integral_GdM(const Kernel& kernel, long h, const StableParams& params, long n_grid,
                                         std::uint64_t seed);

}  // namespace lrdcma
