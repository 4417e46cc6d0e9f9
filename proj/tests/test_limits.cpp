#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "lrdcma/error.hpp"
#include "lrdcma/limits.hpp"
#include "lrdcma/mc.hpp"

using namespace lrdcma;
using Catch::Matchers::WithinRel;
using Catch::Matchers::WithinAbs;

namespace {

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

// 2 rho(1)^2 int int |s - t|^(4d-2) ds dt with rho(1) = int_0^inf (1 + y)^(d-1) y^(d-1) dy by quadrature.
double rosenblatt_variance_quadrature(double d) {
    boost::math::quadrature::tanh_sinh<double> ts;
    const double rho = ts.integrate([d](double y) { return std::pow(1.0 + y, d - 1.0) * std::pow(y, d - 1.0); }, 0.0,
                                    std::numeric_limits<double>::infinity());
    // inner integral over t of |s - t|^(4d-2) on [0, 1], then over s
    auto inner = [d](double s) {
        const double e = 4.0 * d - 1.0;
        return (std::pow(s, e) + std::pow(1.0 - s, e)) / e;
    };
    const double outer = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(inner, 0.0, 1.0, 15, 1e-12);
    return 2.0 * rho * rho * outer;
}

}  // namespace

TEST_CASE("Rosenblatt variance closed form against quadrature") {
    for (double d : {0.3, 0.35, 0.45}) CHECK_THAT(rosenblatt_variance(d), WithinRel(rosenblatt_variance_quadrature(d), 1e-8));
    CHECK_THROWS_AS(rosenblatt_variance(0.2), ParameterError);
}

TEST_CASE("Rosenblatt sampler: mean zero, deterministic, thread independent") {
    RosenblattOptions o;
    o.n_grid = 256;
    const RosenblattSampler s(0.4, o);
    const auto a = s.draws(400, 5, 1);
    const auto b = s.draws(400, 5, 3);
    CHECK(a == b);
    const double sd = std::sqrt(rosenblatt_variance(0.4));
    CHECK(std::abs(mean(a)) < 4.0 * sd / std::sqrt(400.0));
    CHECK(s.window() == 32 * 256);
}

TEST_CASE("Rosenblatt law is skewed right") {
    RosenblattOptions o;
    o.n_grid = 256;
    const auto x = RosenblattSampler(0.4, o).draws(2000, 12, 1);
    const double m = mean(x);
    double m3 = 0.0;
    for (double v : x) m3 += std::pow(v - m, 3);
    CHECK(m3 > 0.0);
}

TEST_CASE("stable sampler characteristic function") {
    // E exp(i t X) = exp(-tau^a |t|^a (1 - i beta sgn(t) tan(pi a/2)) + i mu t)
    for (double alpha : {0.7, 1.25, 1.8}) {
        const double tau = 1.3, beta = 0.6, mu = 0.4;
        const std::size_t n = 200'000;
        Rng rng = make_rng(31, static_cast<std::uint64_t>(alpha * 100));
        std::vector<double> x(n);
        for (auto& v : x) v = sample_stable(alpha, tau, beta, mu, rng);
        for (double t : {0.3, 1.0}) {
            std::complex<double> emp = 0.0;
            for (double v : x) emp += std::exp(std::complex<double>(0.0, t * v));
            emp /= static_cast<double>(n);
            const double ta = std::pow(tau * t, alpha);
            const std::complex<double> want =
                std::exp(std::complex<double>(-ta, ta * beta * std::tan(M_PI * alpha / 2.0) + mu * t));
            INFO("alpha = " << alpha << ", t = " << t);
            CHECK(std::abs(emp - want) < 0.01);
        }
    }
    CHECK_THROWS_AS(sample_stable(2.5, 1.0, 0.0, 0.0, 1), ParameterError);
}

TEST_CASE("stable constant and limit parameters") {
    const double p = 1.25;
    CHECK_THAT(stable_constant(p), WithinRel((1.0 - p) / (std::tgamma(2.0 - p) * std::cos(M_PI * p / 2.0)), 1e-14));
    const auto sp = stable_limit_params(pareto_jumps(1.0, 2.5), 0.25);
    CHECK_THAT(sp.alpha_half, WithinAbs(1.25, 1e-15));
    CHECK_THAT(sp.tau, WithinRel(std::pow(0.25, 0.8) * std::pow(stable_constant(1.25), -0.8), 1e-12));
    CHECK_THAT(sp.mu, WithinRel(0.25 * 5.0, 1e-14));
    CHECK_THROWS_AS(stable_limit_params(brownian()), ParameterError);
    CHECK_THROWS_AS(stable_limit_params(pareto_jumps(1.0, 4.5)), ParameterError);
}

TEST_CASE("tau Monte Carlo cross-check agrees with the analytic value") {
    const auto t = tau_monte_carlo(pareto_jumps(1.0, 2.5), 20'000, 1'500, 3);
    CHECK(t.ok);
    CHECK(t.relative_gap < 0.15);
}

TEST_CASE("GdM sampler reduces to one stable law") {
    // int G dK ~ S_p(tau ||G||_p, 1, mu int G) for G >= 0; with the drift removed the location is zero
    const auto sp = stable_limit_params(pareto_jumps(1.0, 2.5), 1.0);
    const auto k = power_law_kernel(0.1);
    const long n_grid = 256;
    const auto g = GdmSampler::grid_values(k, 0, n_grid);
    double gp = 0.0, g1 = 0.0;
    for (double v : g) {
        gp += std::pow(v, sp.alpha_half) / n_grid;
        g1 += v / n_grid;
    }
    const auto draws = GdmSampler(g, sp).draws(20'000, 4, 2);
    std::vector<double> ref(20'000);
    Rng rng(6);
    for (auto& v : ref)
        v = sample_stable(sp.alpha_half, sp.tau * std::pow(gp, 1.0 / sp.alpha_half), 1.0, (sp.mu - sp.drift) * g1, rng);
    CHECK(ks_two_sample(draws, ref) < 0.02);
}

TEST_CASE("GdM Riemann sum refinement consistency") {
    const auto sp = stable_limit_params(pareto_jumps(1.0, 2.5), 1.0);
    const auto k = power_law_kernel(0.1);
    const auto a = GdmSampler(GdmSampler::grid_values(k, 1, 128), sp).draws(20'000, 8, 1);
    const auto b = GdmSampler(GdmSampler::grid_values(k, 1, 256), sp).draws(20'000, 9, 1);
    CHECK(ks_two_sample(a, b) <= 0.03);
}
