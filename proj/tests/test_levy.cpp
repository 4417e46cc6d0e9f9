#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "lrdcma/error.hpp"
#include "lrdcma/levy.hpp"
#include "lrdcma/mc.hpp"

using namespace lrdcma;
using Catch::Matchers::WithinRel;
using Catch::Matchers::WithinAbs;

namespace {

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

double var(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

}  // namespace

TEST_CASE("Pareto jump moments") {
    const auto m = pareto_jumps(1.0, 2.5, 1.0);
    // E|J|^k = alpha x0^k / (alpha - k)
    CHECK_THAT(jump_abs_moment(m, 2.0), WithinRel(2.5 / 0.5, 1e-12));
    CHECK(std::isinf(jump_abs_moment(m, 4.0)));
    CHECK_THAT(jump_upper_tail(m, 2.0), WithinRel(0.5 * std::pow(2.0, -2.5), 1e-12));
    CHECK_THAT(variance(m), WithinRel(5.0, 1e-12));
    CHECK_FALSE(fourth_moment(m).finite);
    CHECK(fourth_moment(pareto_jumps(1.0, 2.5, 1.0, true)).finite);
    CHECK(fourth_moment(brownian(2.0)).eta == 3.0);
}

TEST_CASE("model validation") {
    CHECK_THROWS_AS(pareto_jumps(1.0, 1.5).validate(), ParameterError);
    CHECK_NOTHROW(pareto_jumps(1.0, 1.5, 1.0, true).validate());
    LevyModel zero;
    CHECK_THROWS_AS(zero.validate(), ParameterError);
}

TEST_CASE("variance matches the sample variance of increments within 4 standard errors") {
    for (const auto& model : {brownian(1.3), pareto_jumps(2.0, 4.5, 0.5), pareto_jumps(1.0, 2.5, 1.0, true)}) {
        const double dt = 0.25;
        const auto x = sample_increments(model, dt, 200'000, 11);
        const double s2 = variance(model) * dt;
        // SE of the sample variance: sqrt((mu4 - s^4) / n)
        const auto fm = fourth_moment(model);
        const double mu4 = dt * fm.kappa4 + 3.0 * s2 * s2;
        const double se = std::sqrt((mu4 - s2 * s2) / static_cast<double>(x.size()));
        CHECK(std::abs(var(x) - s2) < 4.0 * se);
        CHECK(std::abs(mean(x)) < 4.0 * std::sqrt(s2 / static_cast<double>(x.size())));
    }
}

TEST_CASE("increment additivity: m increments at step 1/m against one at step 1") {
    const auto model = pareto_jumps(1.0, 2.5, 1.0);
    const int m = 4;
    const std::size_t n = 100'000;
    const auto fine = sample_increments(model, 1.0 / m, n * m, 21);
    std::vector<double> summed(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) summed[i] += fine[i * m + static_cast<std::size_t>(j)];
    const auto coarse = sample_increments(model, 1.0, n, 22);
    CHECK(ks_two_sample(summed, coarse) <= 0.02);
}

TEST_CASE("tail probability against the exact single-jump asymptote far out") {
    const auto model = pareto_jumps(1.0, 2.5, 1.0);
    const auto t = tail_probability(model, 200.0, 200'000, 5);
    CHECK_THAT(t.probability, WithinRel(t.asymptote, 0.05));
    CHECK(t.std_error < 0.05 * t.probability);
}

TEST_CASE("norming a_N tracks the asymptote and b_N is below sigma^2") {
    const auto model = pareto_jumps(1.0, 2.5, 1.0);
    const auto a = norming_a(model, 100'000, 200'000, 3);
    // P[|L_1| > y] ~ lambda y^-alpha gives a_N ~ N^(1/alpha)
    CHECK_THAT(a.a_mc, WithinRel(a.a_asym, 0.05));
    CHECK_THAT(a.a_asym, WithinRel(std::pow(1e5, 0.4), 1e-9));
    const auto b = norming_b(model, a.a_mc, 100'000, 200'000, 4);
    CHECK(b.b_N < variance(model));
    CHECK(b.karamata > 0.0);
}

TEST_CASE("sample_increments is deterministic in the seed") {
    const auto model = pareto_jumps(3.0, 3.0, 1.0);
    CHECK(sample_increments(model, 0.5, 1000, 9) == sample_increments(model, 0.5, 1000, 9));
    CHECK(sample_increments(model, 0.5, 1000, 9) != sample_increments(model, 0.5, 1000, 10));
    CHECK_THROWS_AS(sample_increments(model, 0.0, 10, 1), ParameterError);
}

TEST_CASE("aggregate increments keep the variance of the long interval") {
    const auto model = pareto_jumps(1.0, 4.5, 1.0);
    Rng rng = make_rng(77, 0);
    std::vector<double> x(40'000);
    for (auto& v : x) v = sample_aggregate(model, 500.0, rng);
    const double s2 = 500.0 * variance(model);
    CHECK_THAT(var(x), WithinRel(s2, 0.04));
}
