#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lrdcma/kernel.hpp"
#include "lrdcma/levy.hpp"
#include "lrdcma/simulate.hpp"

namespace lrdcma {

struct AcvEstimate {
    long N = 0;
    long H = 0;
    std::vector<double> gamma_hat;  // lags 0..H, divisor N
    std::vector<double> gamma;      // theoretical values; empty until attached
};

// gamma_hat(h) = (1/N) sum_{t=1}^{N} X_t X_{t+h}; `x` must hold at least N + H values.
[[nodiscard]] AcvEstimate sample_acv(std::span<const double> x, long N, long H);
[[nodiscard]] AcvEstimate sample_acv(const SamplePath& path, long H);

// Fills acv.gamma with the continuous (mesh = 0) or step-kernel (mesh = m) autocovariance.
void attach_theoretical(AcvEstimate& acv, const Kernel& kernel, double sigma2, int mesh = 0);

// rho_hat(h) = gamma_hat(h) / gamma_hat(0). @throws NumericError when gamma_hat(0) = 0.
[[nodiscard]] std::vector<double> sample_acf(const AcvEstimate& acv);

struct DEstimate {
    double value = 0.0;
    bool in_range = true;  // value in (0, 1/2)
};

// d_hat = log2(rho1 + 1) / 2, unclamped. @throws ParameterError when rho1 <= -1.
[[nodiscard]] DEstimate estimate_d(double rho1);

enum class Regime { gaussian, rosenblatt, stable, boundary };
enum class Scaling { n_pow, n_over_aN2, sqrt_n, sqrt_n_over_log };

[[nodiscard]] std::string to_string(Regime r);
[[nodiscard]] std::string to_string(Scaling s);
[[nodiscard]] Scaling scaling_from_string(const std::string& s);

// Regime of the sample autocovariance for memory d under `model`; exact ties use a 1e-12 tolerance.
[[nodiscard]] Regime classify_regime(double d, const LevyModel& model);

/**
 * @brief Limit of the scaled sample autocovariance at lags 0..H.
 *
 * gaussian: sqrt(N) (or sqrt(N / log N) at d = 1/4 with a Brownian driver) with covariance V.
 * rosenblatt: N^(1-2d) with limit coefficient * U_d(1) at every lag.
 * stable: N / a_N^2 with limit int G_h dM, M_s = K_s - s alpha/(alpha-2).
 */
struct LimitLaw {
    Regime regime = Regime::boundary;
    Scaling scaling = Scaling::sqrt_n;
    double rate_exponent = 0.0;  // decay exponent of the unscaled error
    std::string reason;          // set for boundary cases
    double d = 0.0;
    double coefficient = 0.0;    // rosenblatt: C_d^2 sigma^2
    double alpha = 0.0;          // stable: alpha of the driver, index alpha/2
    double drift = 0.0;          // stable: alpha/(alpha-2)
    Eigen::MatrixXd V;           // gaussian
};

struct LimitOptions {
    int mesh = 0;             // 0: continuous kernel; m: step kernel of mesh m
    long lag_window = 4096;   // K_v, lags summed directly before the fitted tail
};

[[nodiscard]] LimitLaw theoretical_limits(const Kernel& kernel, const LevyModel& model, long H,
                                          LimitOptions opt = {});

// V for the Gaussian regime (also usable at other d when the sums converge).
[[nodiscard]] Eigen::MatrixXd gaussian_covariance(const Kernel& kernel, const LevyModel& model, long H,
                                                  LimitOptions opt = {});

}  // namespace lrdcma
