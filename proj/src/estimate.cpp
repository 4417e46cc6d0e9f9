#include "lrdcma/estimate.hpp"

#include <cmath>
#include <limits>

#include "lrdcma/error.hpp"
#include "lrdcma/quadrature.hpp"

namespace lrdcma {

namespace {

constexpr double kTieTol = 1e-12;

bool heavy_tailed(const LevyModel& m) { return m.has_jumps() && !fourth_moment(m).finite; }

// Autocovariances at lags 0..n.
std::vector<double> gamma_table(const Kernel& k, double sigma2, long n, int mesh) {
    if (mesh > 0) return step_autocovariance_sequence(k, sigma2, mesh, n);
    std::vector<double> g(static_cast<std::size_t>(n + 1));
    for (long h = 0; h <= n; ++h) g[static_cast<std::size_t>(h)] = autocovariance(k, sigma2, static_cast<double>(h));
    return g;
}

// int_0^1 G_p G_q ds (continuous) or its cell average (step kernel).
double g_product_integral(const Kernel& k, long p, long q, int mesh) {
    if (mesh > 0) {
        const auto a = G_step_cells(k, mesh, p);
        const auto b = G_step_cells(k, mesh, q);
        double s = 0.0;
        for (int j = 0; j < mesh; ++j) s += a[static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(j)];
        return s / mesh;
    }
    return integrate([&](double s) { return G(k, p, s).value * G(k, q, s).value; }, 0.0, 1.0, 1e-8, "G product")
        .value;
}

}  // namespace

AcvEstimate sample_acv(std::span<const double> x, long N, long H) {
    if (N < 1 || H < 0) throw ParameterError("sample_acv: need N >= 1 and H >= 0");
    if (static_cast<long>(x.size()) < N + H) throw ParameterError("sample_acv: path shorter than N + H");
    AcvEstimate out;
    out.N = N;
    out.H = H;
    out.gamma_hat.resize(static_cast<std::size_t>(H + 1));
    for (long h = 0; h <= H; ++h) {
        double s = 0.0;
        for (long t = 0; t < N; ++t) s += x[static_cast<std::size_t>(t)] * x[static_cast<std::size_t>(t + h)];
        out.gamma_hat[static_cast<std::size_t>(h)] = s / static_cast<double>(N);
    }
    return out;
}

AcvEstimate sample_acv(const SamplePath& path, long H) {
    if (H > path.grid.H) throw ParameterError("sample_acv: lag beyond the simulated H");
    auto out = sample_acv(path.values, path.grid.N, H);
    if (out.gamma_hat[0] < 0.0) throw NumericError("sample_acv: negative gamma_hat(0) on a realized path");
    return out;
}

void attach_theoretical(AcvEstimate& acv, const Kernel& kernel, double sigma2, int mesh) {
    acv.gamma = gamma_table(kernel, sigma2, acv.H, mesh);
}

std::vector<double> sample_acf(const AcvEstimate& acv) {
    if (acv.gamma_hat.empty() || acv.gamma_hat[0] == 0.0) throw NumericError("sample_acf: degenerate path, gamma_hat(0) = 0");
    std::vector<double> rho(acv.gamma_hat.size());
    for (std::size_t h = 0; h < rho.size(); ++h) rho[h] = acv.gamma_hat[h] / acv.gamma_hat[0];
    rho[0] = 1.0;
    return rho;
}

DEstimate estimate_d(double rho1) {
    if (!(rho1 > -1.0)) throw ParameterError("estimate_d: rho1 must exceed -1");
    DEstimate out;
    out.value = 0.5 * std::log(rho1 + 1.0) / std::log(2.0);
    out.in_range = out.value > 0.0 && out.value < 0.5;
    return out;
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::gaussian: return "gaussian";
        case Regime::rosenblatt: return "rosenblatt";
        case Regime::stable: return "stable";
        case Regime::boundary: return "boundary";
    }
    return "boundary";
}

std::string to_string(Scaling s) {
    switch (s) {
        case Scaling::n_pow: return "n_pow";
        case Scaling::n_over_aN2: return "n_over_aN2";
        case Scaling::sqrt_n: return "sqrt_n";
        case Scaling::sqrt_n_over_log: return "sqrt_n_over_log";
    }
    return "n_pow";
}

Scaling scaling_from_string(const std::string& s) {
    if (s == "n_pow") return Scaling::n_pow;
    if (s == "n_over_aN2") return Scaling::n_over_aN2;
    if (s == "sqrt_n") return Scaling::sqrt_n;
    if (s == "sqrt_n_over_log") return Scaling::sqrt_n_over_log;
    throw ParameterError("unknown scaling '" + s + "'");
}

Regime classify_regime(double d, const LevyModel& model) {
    if (heavy_tailed(model)) {
        if (model.brownian_sd > 0.0 || !(model.alpha < 4.0)) return Regime::boundary;
        const double inv = 1.0 / model.alpha;
        if (std::abs(d - inv) <= kTieTol) return Regime::boundary;
        return d < inv ? Regime::stable : Regime::rosenblatt;
    }
    if (std::abs(d - 0.25) <= kTieTol) return model.pure_brownian() ? Regime::gaussian : Regime::boundary;
    return d < 0.25 ? Regime::gaussian : Regime::rosenblatt;
}

Eigen::MatrixXd gaussian_covariance(const Kernel& kernel, const LevyModel& model, long H, LimitOptions opt) {
    const double sigma2 = variance(model);
    const auto fm = fourth_moment(model);
    if (!fm.finite) throw ParameterError("gaussian_covariance: needs a finite fourth moment");
    const long Kv = std::max(opt.lag_window, 8 * (H + 1));
    const auto g = gamma_table(kernel, sigma2, Kv + 2 * H + 1, opt.mesh);
    auto gam = [&](long k) { return g[static_cast<std::size_t>(std::labs(k))]; };
    // gamma(k) ~ A k^(2d-1) + B k^(d-1) beyond the window, fitted at Kv/2 and Kv;
    // sums of k^p over k > Kv by the midpoint rule
    const double e1 = 2.0 * kernel.d() - 1.0, e2 = kernel.d() - 1.0;
    const double k1 = static_cast<double>(Kv / 2), k2 = static_cast<double>(Kv);
    const double det = std::pow(k1, e1) * std::pow(k2, e2) - std::pow(k2, e1) * std::pow(k1, e2);
    const double A = (gam(Kv / 2) * std::pow(k2, e2) - gam(Kv) * std::pow(k1, e2)) / det;
    const double B = (std::pow(k1, e1) * gam(Kv) - std::pow(k2, e1) * gam(Kv / 2)) / det;
    auto power_sum = [&](double p) {
        return p < -1.0 ? std::pow(k2 + 0.5, p + 1.0) / -(p + 1.0) : std::numeric_limits<double>::infinity();
    };
    const double tail_sum = A * A * power_sum(2.0 * e1) + 2.0 * A * B * power_sum(e1 + e2) + B * B * power_sum(2.0 * e2);
    Eigen::MatrixXd V(H + 1, H + 1);
    for (long p = 0; p <= H; ++p) {
        for (long q = p; q <= H; ++q) {
            double s = 0.0;
            for (long k = -Kv; k <= Kv; ++k) s += gam(k) * gam(k - p + q) + gam(k + q) * gam(k - p);
            s += 2.0 * 2.0 * tail_sum;
            if (std::abs(fm.eta - 3.0) > 0.0 && !kernel.test_only())
                s += (fm.eta - 3.0) * sigma2 * sigma2 * g_product_integral(kernel, p, q, opt.mesh);
            V(p, q) = V(q, p) = s;
        }
    }
    return V;
}

LimitLaw theoretical_limits(const Kernel& kernel, const LevyModel& model, long H, LimitOptions opt) {
    if (H < 0) throw ParameterError("theoretical_limits: H must be nonnegative");
    LimitLaw law;
    const double d = kernel.d();
    law.d = d;
    law.regime = classify_regime(d, model);
    const double sigma2 = variance(model);
    switch (law.regime) {
        case Regime::gaussian:
            if (std::abs(d - 0.25) <= kTieTol) {
                law.scaling = Scaling::sqrt_n_over_log;
                law.rate_exponent = 0.5;
                const double c = 2.0 * kernel.C_d() * kernel.C_d() * sigma2;
                law.coefficient = c;
                law.V = Eigen::MatrixXd::Constant(H + 1, H + 1, c * c);
            } else {
                law.scaling = Scaling::sqrt_n;
                law.rate_exponent = 0.5;
                law.V = gaussian_covariance(kernel, model, H, opt);
            }
            break;
        case Regime::rosenblatt:
            law.scaling = Scaling::n_pow;
            law.rate_exponent = 1.0 - 2.0 * d;
            law.coefficient = kernel.C_d() * kernel.C_d() * sigma2;
            break;
        case Regime::stable:
            law.scaling = Scaling::n_over_aN2;
            law.alpha = model.alpha;
            law.rate_exponent = 1.0 - 2.0 / model.alpha;
            law.drift = model.alpha / (model.alpha - 2.0);
            break;
        case Regime::boundary:
            if (heavy_tailed(model) && model.brownian_sd > 0.0)
                law.reason = "regularly varying jumps together with a Gaussian part";
            else if (heavy_tailed(model) && !(model.alpha < 4.0))
                law.reason = "alpha = 4 with an infinite fourth moment";
            else if (heavy_tailed(model))
                law.reason = "d = 1/alpha: no limit law is available";
            else
                law.reason = "d = 1/4 with a non-Brownian driver: no limit law is available";
            break;
    }
    return law;
}

}  // namespace lrdcma
