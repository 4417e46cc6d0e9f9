#include <catch_amalgamated.hpp>

#include <cmath>

#include "lrdcma/error.hpp"
#include "lrdcma/estimate.hpp"
#include "oracles.hpp"

using namespace lrdcma;
using Catch::Matchers::WithinRel;
using Catch::Matchers::WithinAbs;

TEST_CASE("sample_acv equals the naive double loop") {
    Rng rng(3);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 20; ++trial) {
        const long N = 1 + static_cast<long>(rng() % 300);
        const long H = static_cast<long>(rng() % 20);
        std::vector<double> x(static_cast<std::size_t>(N + H));
        for (auto& v : x) v = nd(rng) * 3.0 + 1.0;
        const auto got = sample_acv(x, N, H);
        const auto want = oracle::naive_acv(x, N, H);
        for (long h = 0; h <= H; ++h) CHECK_THAT(got.gamma_hat[h], WithinAbs(want[h], 1e-12 * std::abs(want[0])));
    }
}

TEST_CASE("sample_acv on a constant path") {
    const std::vector<double> x{1.0, 1.0, 1.0};
    const auto a = sample_acv(x, 3, 0);
    CHECK(a.gamma_hat[0] == 1.0);
    CHECK_THROWS_AS(sample_acv(x, 3, 1), ParameterError);
}

TEST_CASE("scale equivariance of gamma_hat, rho_hat and d_hat") {
    Rng rng(8);
    std::normal_distribution<double> nd;
    std::vector<double> x(500);
    double prev = 0.0;
    for (auto& v : x) v = prev = 0.6 * prev + nd(rng);
    const double c = -3.7;
    std::vector<double> y(x);
    for (auto& v : y) v *= c;
    const auto a = sample_acv(x, 490, 10), b = sample_acv(y, 490, 10);
    const auto ra = sample_acf(a), rb = sample_acf(b);
    for (std::size_t h = 0; h <= 10; ++h) {
        CHECK_THAT(b.gamma_hat[h], WithinAbs(c * c * a.gamma_hat[h], 1e-12 * c * c * a.gamma_hat[0]));
        CHECK_THAT(rb[h], WithinAbs(ra[h], 1e-12));
    }
    CHECK_THAT(estimate_d(rb[1]).value, WithinAbs(estimate_d(ra[1]).value, 1e-12));
}

TEST_CASE("d_hat inverts rho(1) = 2^(2d) - 1 and is monotone") {
    for (double d : {0.05, 0.2, 0.45}) CHECK_THAT(estimate_d(std::pow(2.0, 2 * d) - 1.0).value, WithinAbs(d, 1e-14));
    double last = -1e300;
    for (double r = -0.99; r < 5.0; r += 0.01) {
        const double v = estimate_d(r).value;
        CHECK(v > last);
        last = v;
    }
    CHECK_FALSE(estimate_d(-0.5).in_range);
    CHECK(estimate_d(0.5).in_range);
    CHECK_THROWS_AS(estimate_d(-1.0), ParameterError);
}

TEST_CASE("regime is a step function of d with jumps only at 1/4 and 1/alpha") {
    const auto gauss = brownian();
    const auto heavy = pareto_jumps(1.0, 2.5);
    const auto light = pareto_jumps(1.0, 2.5, 1.0, true);
    Regime prev_g = classify_regime(0.001, gauss), prev_h = classify_regime(0.001, heavy);
    for (int i = 1; i < 500; ++i) {
        const double d = 0.001 * i;
        const Regime rg = classify_regime(d, gauss), rh = classify_regime(d, heavy);
        if (rg != prev_g) CHECK(std::abs(d - 0.25) < 0.0015);
        if (rh != prev_h) CHECK(std::abs(d - 0.4) < 0.0015);
        prev_g = rg;
        prev_h = rh;
    }
    CHECK(classify_regime(0.2, gauss) == Regime::gaussian);
    CHECK(classify_regime(0.3, gauss) == Regime::rosenblatt);
    CHECK(classify_regime(0.25, gauss) == Regime::gaussian);
    CHECK(classify_regime(0.25, light) == Regime::boundary);
    CHECK(classify_regime(0.1, heavy) == Regime::stable);
    CHECK(classify_regime(0.45, heavy) == Regime::rosenblatt);
    CHECK(classify_regime(0.4, heavy) == Regime::boundary);
    LevyModel mixed = heavy;
    mixed.brownian_sd = 1.0;
    CHECK(classify_regime(0.1, mixed) == Regime::boundary);
}

TEST_CASE("theoretical limits: rates and boundary reasons") {
    const auto k = power_law_kernel(0.35);
    const auto r = theoretical_limits(k, brownian(2.0), 2);
    CHECK(r.regime == Regime::rosenblatt);
    CHECK_THAT(r.rate_exponent, WithinAbs(0.3, 1e-15));
    CHECK_THAT(r.coefficient, WithinRel(4.0, 1e-15));
    const auto s = theoretical_limits(power_law_kernel(0.1), pareto_jumps(1.0, 2.5), 0);
    CHECK(s.regime == Regime::stable);
    CHECK_THAT(s.rate_exponent, WithinAbs(0.2, 1e-15));
    CHECK_THAT(s.drift, WithinRel(5.0, 1e-15));
    const auto b = theoretical_limits(power_law_kernel(0.4), pareto_jumps(1.0, 2.5), 0);
    CHECK(b.regime == Regime::boundary);
    CHECK(b.reason.find("1/alpha") != std::string::npos);
    const auto h = theoretical_limits(power_law_kernel(0.25), brownian(1.0), 1);
    CHECK(h.scaling == Scaling::sqrt_n_over_log);
    CHECK_THAT(h.V(0, 1), WithinRel(4.0, 1e-12));  // (2 C_d^2 sigma^2)^2
}

TEST_CASE("Gaussian covariance: lag-window convergence and Brownian formula") {
    const auto k = power_law_kernel(0.15);
    LimitOptions a, b;
    a.mesh = b.mesh = 4;
    a.lag_window = 1024;
    b.lag_window = 8192;
    const auto Va = gaussian_covariance(k, brownian(), 2, a);
    const auto Vb = gaussian_covariance(k, brownian(), 2, b);
    CHECK_THAT(Va(0, 0), WithinRel(Vb(0, 0), 1e-4));
    CHECK_THAT(Va(1, 2), WithinRel(Vb(1, 2), 1e-4));
    CHECK_THAT(Va(1, 2), WithinRel(Va(2, 1), 1e-15));
    // v00 = 2 sum_k gamma(k)^2 for a Gaussian driver; direct sum plus tail with gamma ~ c k^(2d-1)
    // one-term tails at K and 2K, Richardson-combined for the K^(-0.55) tail error
    const auto g = step_autocovariance_sequence(k, 1.0, 4, 200000);
    auto partial = [&g](std::size_t K) {
        double s = g[0] * g[0];
        for (std::size_t i = 1; i <= K; ++i) s += 2.0 * g[i] * g[i];
        const double c = g[K] / std::pow(static_cast<double>(K), -0.7);
        return s + 2.0 * c * c * std::pow(K + 0.5, -0.4) / 0.4;
    };
    const double s1 = partial(100000), s2 = partial(200000);
    const double r = std::pow(2.0, 0.55);
    CHECK_THAT(Vb(0, 0), WithinRel(2.0 * (r * s2 - s1) / (r - 1.0), 2e-4));
}

TEST_CASE("non-Gaussian driver adds the fourth-cumulant term") {
    const auto k = power_law_kernel(0.15);
    const auto light = pareto_jumps(1.0, 2.5, 1.0, true);
    LevyModel bm = brownian(std::sqrt(variance(light)));
    LimitOptions o;
    o.mesh = 2;
    const double v_jump = gaussian_covariance(k, light, 0, o)(0, 0);
    const double v_bm = gaussian_covariance(k, bm, 0, o)(0, 0);
    CHECK(v_jump > v_bm);
}
