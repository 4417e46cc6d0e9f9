#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

namespace lrdcma {

enum class KernelVariant { power_law, fln_increment, ficarma, indicator };

[[nodiscard]] std::string to_string(KernelVariant v);
[[nodiscard]] KernelVariant kernel_variant_from_string(const std::string& name);

/**
 * @brief Parameters of a kernel f with f = 0 on (-inf, 0] and f(t) ~ C_d t^(d-1).
 *
 * CARMA polynomials: a(z) = z^p + a[0] z^(p-1) + ... + a[p-1] (monic) and
 * b(z) = b[0] + b[1] z + ... + b[q] z^q. C_d is only read for the power-law variant;
 * the other variants derive it.
 */
struct KernelSpec {
    KernelVariant variant = KernelVariant::power_law;
    double d = 0.3;
    double C_d = 1.0;
    std::vector<double> a;
    std::vector<double> b;
    double quad_tol = 1e-8;
    long I_max = 4096;
};

// Kernel g(t) = sum_j b(l_j)/a'(l_j) exp(l_j t) of a causal CARMA process.
class CarmaKernel {
public:
    CarmaKernel(std::vector<double> a, std::vector<double> b);

    [[nodiscard]] double operator()(double t) const;
    // Imaginary part of the residue sum at t; round-off only for real inputs.
    [[nodiscard]] double imaginary_residue(double t) const;
    [[nodiscard]] const std::vector<std::complex<double>>& roots() const noexcept { return roots_; }
    [[nodiscard]] double transfer_at_zero() const noexcept;  // b(0)/a(0) = integral of g
    [[nodiscard]] double first_moment() const noexcept;      // integral of v g(v)
    [[nodiscard]] double slowest_rate() const noexcept;      // min |Re l_j|

private:
    std::vector<double> a_, b_;
    std::vector<std::complex<double>> roots_, residues_;
};

[[nodiscard]] double carma_kernel(const std::vector<double>& a, const std::vector<double>& b, double t);

class Kernel {
public:
    explicit Kernel(KernelSpec spec);

    [[nodiscard]] double operator()(double t) const;
    [[nodiscard]] const KernelSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] KernelVariant variant() const noexcept { return spec_.variant; }
    [[nodiscard]] double d() const noexcept { return spec_.d; }
    [[nodiscard]] double C_d() const noexcept { return C_; }
    // Second-order tail coefficient: f(t) = C_d t^(d-1) + c1 t^(d-2) + o(t^(d-2)).
    [[nodiscard]] double tail_c1() const noexcept { return c1_; }
    // Beyond this point the two-term tail expansion is accurate to working precision.
    [[nodiscard]] double asymptotic_start() const noexcept { return asym_start_; }
    // Reported constant K with |f(t)| <= K max(1, t^(d-1)).
    [[nodiscard]] double bound_K() const noexcept { return K_; }
    [[nodiscard]] bool test_only() const noexcept { return spec_.variant == KernelVariant::indicator; }
    [[nodiscard]] const CarmaKernel* carma() const noexcept { return carma_.get(); }

    // Two-term asymptotic expansion of f and its derivative.
    [[nodiscard]] double tail_value(double t) const noexcept;
    [[nodiscard]] double tail_derivative(double t) const noexcept;

private:
    KernelSpec spec_;
    std::shared_ptr<const CarmaKernel> carma_;
    double C_ = 0.0;
    double c1_ = 0.0;
    double asym_start_ = 1.0;
    double K_ = 0.0;
};

[[nodiscard]] Kernel power_law_kernel(double d, double C_d = 1.0);
[[nodiscard]] Kernel fln_increment_kernel(double d);
[[nodiscard]] Kernel ficarma_kernel(std::vector<double> a, std::vector<double> b, double d);
[[nodiscard]] Kernel indicator_kernel();

[[nodiscard]] inline double eval(const Kernel& k, double t) { return k(t); }

/**
 * @brief FICARMA kernel f(t) = int_0^t g(t-u) u^(d-1) / Gamma(d) du.
 *
 * The piece u in [0, min(t,1)] uses u = w^(1/d), which removes the endpoint singularity.
 * @throws NumericError when the adaptive quadrature does not reach quad_tol.
 */
[[nodiscard]] double ficarma_eval(const Kernel& kernel, double t, double quad_tol);

// gamma(h) = sigma2 * int_0^inf f(s) f(s+h) ds for the continuous kernel.
[[nodiscard]] double autocovariance(const Kernel& kernel, double sigma2, double h, double quad_tol = 1e-8);

// sigma2 * int_T^inf f(s)^2 ds.
[[nodiscard]] double l2_tail(const Kernel& kernel, double sigma2, double T, double quad_tol = 1e-10);

/**
 * @brief Autocovariance of the step kernel f_m(x) = f(floor(m x)/m) at integer lag h.
 *
 * Equals sigma2 * (1/m) * sum_{j>=0} f(j/m) f(j/m + h); this is the exact
 * autocovariance of the discretized process the simulator produces.
 */
[[nodiscard]] double step_autocovariance(const Kernel& kernel, double sigma2, int m, long h);

// Lags 0..H of step_autocovariance via one FFT autocorrelation.
[[nodiscard]] std::vector<double> step_autocovariance_sequence(const Kernel& kernel, double sigma2, int m, long H);

struct SeriesValue {
    double value = 0.0;
    double tail_bound = 0.0;  // K^2 * sum_{i > I_max} i^(2d-2)
};

// G_h(s) = sum_i f(i+s) f(i+h+s), s in [0, 1].
[[nodiscard]] SeriesValue G(const Kernel& kernel, long h, double s);
// Same series for the step kernel f_m.
[[nodiscard]] SeriesValue G_step(const Kernel& kernel, int m, long h, double s);
// The m values of G_step on the cells [j/m, (j+1)/m).
[[nodiscard]] std::vector<double> G_step_cells(const Kernel& kernel, int m, long h);

}  // namespace lrdcma
