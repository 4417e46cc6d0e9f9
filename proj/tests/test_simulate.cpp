#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>

#include "lrdcma/error.hpp"
#include "lrdcma/estimate.hpp"
#include "lrdcma/fft.hpp"
#include "lrdcma/simulate.hpp"
#include "oracles.hpp"

using namespace lrdcma;
using Catch::Matchers::WithinRel;
using Catch::Matchers::WithinAbs;

TEST_CASE("FFT convolution equals the direct sum") {
    Rng rng(5);
    std::normal_distribution<double> nd;
    for (std::size_t n : {1u, 7u, 100u, 1000u}) {
        std::vector<double> c(n / 2 + 3), z(n);
        for (auto& v : c) v = nd(rng);
        for (auto& v : z) v = nd(rng);
        const auto want = oracle::direct_convolution(c, z);
        const FftConvolver conv(c, z.size());
        std::vector<double> got(z.size());
        conv.apply(z, got);
        double scale = 1.0;
        for (double v : want) scale = std::max(scale, std::abs(v));
        for (std::size_t i = 0; i < n; ++i) CHECK_THAT(got[i], WithinAbs(want[i], 1e-10 * scale));
    }
}

TEST_CASE("good_fft_size returns 5-smooth sizes") {
    for (std::size_t n : {1u, 17u, 1000u, 12345u}) {
        std::size_t m = good_fft_size(n);
        CHECK(m >= n);
        for (std::size_t p : {2u, 3u, 5u})
            while (m % p == 0) m /= p;
        CHECK(m == 1);
    }
}

TEST_CASE("simulator: FFT path equals the direct path on the same stream") {
    SimulationGrid g;
    g.m = 3;
    g.N = 200;
    g.H = 5;
    g.far_past = false;
    const Simulator sim(power_law_kernel(0.3), brownian(), g);
    std::vector<double> z(static_cast<std::size_t>(g.stream_length()));
    Rng rng(1);
    std::normal_distribution<double> nd;
    for (auto& v : z) v = nd(rng);
    const auto a = sim.values_from_stream(z, ConvolutionMethod::direct);
    const auto b = sim.values_from_stream(z, ConvolutionMethod::fft);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK_THAT(b[i], WithinAbs(a[i], 1e-10));
}

TEST_CASE("simulate is deterministic in (seed, replicate)") {
    SimulationGrid g;
    g.m = 2;
    g.N = 256;
    const Simulator sim(fln_increment_kernel(0.3), pareto_jumps(1.0, 3.0), g);
    CHECK(sim.simulate(3, 4).values == sim.simulate(3, 4).values);
    CHECK(sim.simulate(3, 4).values != sim.simulate(3, 5).values);
}

TEST_CASE("grid validation and truncation budget") {
    SimulationGrid g;
    g.m = 2;
    g.N = 100;
    g.K_trunc = 150;  // < m N
    CHECK_THROWS_AS(g.validate(), ParameterError);
    g.K_trunc = 0;
    g.far_past = false;
    g.truncation_budget = 1e-6;
    CHECK_THROWS_AS(Simulator(power_law_kernel(0.4), brownian(), g), ConfigError);
}

TEST_CASE("far past makes the simulated variance match the step-kernel autocovariance") {
    const auto k = power_law_kernel(0.35);
    SimulationGrid g;
    g.m = 2;
    g.N = 64;
    const Simulator sim(k, brownian(), g);
    const int R = 3000;
    double s = 0.0;
    for (int r = 0; r < R; ++r) {
        const auto p = sim.simulate(17, static_cast<std::uint64_t>(r));
        s += p.values[0] * p.values[0];
    }
    const double g0 = step_autocovariance(k, 1.0, 2, 0);
    // X_1 is Gaussian: SE of the mean square is g0 sqrt(2/R)
    CHECK(std::abs(s / R - g0) < 4.0 * g0 * std::sqrt(2.0 / R));
}

TEST_CASE("decomposition against explicit k = k' and k != k' sums") {
    Rng pick(99);
    for (int trial = 0; trial < 20; ++trial) {
        SimulationGrid g;
        g.m = 1 + static_cast<int>(pick() % 4);
        g.N = 4 + static_cast<long>(pick() % 20);
        g.H = static_cast<long>(pick() % 4);
        g.far_past = false;
        g.retain_increments = true;
        const auto k = power_law_kernel(0.1 + 0.35 * static_cast<double>(pick() % 100) / 100.0);
        const auto model = trial % 2 ? brownian(1.0) : pareto_jumps(2.0, 2.5);
        const auto path = Simulator(k, model, g).simulate(static_cast<std::uint64_t>(trial));
        const double eps = g.epsilon();
        const long long K = g.K();
        for (long h = 0; h <= g.H; ++h) {
            const double b = 0.7;
            double diag = 0.0, off = 0.0;
            for (long t = 1; t <= g.N; ++t) {
                const long long P = g.position(t), Q = g.position(t + h);
                for (long long i = 0; i <= K; ++i)
                    for (long long j = 0; j <= K; ++j) {
                        const double term = k(eps * i) * k(eps * j) * path.increments[P - i] * path.increments[Q - j];
                        if (P - i == Q - j)
                            diag += term;
                        else
                            off += term;
                    }
            }
            diag /= g.N;
            off /= g.N;
            double wsum = 0.0;
            for (long long i = 0; i + g.m * h <= K; ++i) wsum += k(eps * i) * k(eps * (i + g.m * h));
            const double centering = eps * b * wsum;
            const auto dec = decompose(path, k, h, b);
            const double scale = std::max(1.0, std::abs(dec.gamma_hat));
            CHECK_THAT(dec.diagonal, WithinAbs(diag - centering, 1e-10 * scale));
            CHECK_THAT(dec.off_diagonal, WithinAbs(off, 1e-10 * scale));
            CHECK_THAT(dec.centering, WithinAbs(centering, 1e-10 * scale));
            CHECK_THAT(dec.diagonal + dec.off_diagonal + dec.centering, WithinAbs(dec.gamma_hat, 1e-10 * scale));
        }
    }
}

TEST_CASE("decompose needs retained increments without far past") {
    SimulationGrid g;
    g.N = 16;
    const auto k = power_law_kernel(0.3);
    const auto p = Simulator(k, brownian(), g).simulate(1);
    CHECK_THROWS_AS(decompose(p, k, 0, 1.0), StateError);
    g.retain_increments = true;
    const auto q = Simulator(k, brownian(), g).simulate(1);
    CHECK_THROWS_AS(decompose(q, k, 0, 1.0), StateError);
}

TEST_CASE("increment dump round trip") {
    const std::vector<double> v{1.5, -2.25, 1e-300, 3.0};
    const auto path = (std::filesystem::temp_directory_path() / "lrdcma_dump_test.bin").string();
    write_increment_dump(path, 4, v);
    int m = 0;
    CHECK(read_increment_dump(path, &m) == v);
    CHECK(m == 4);
    CHECK(std::filesystem::file_size(path) == 4 + 4 + 4 + 8 + 8 * v.size());
    std::filesystem::remove(path);
}

TEST_CASE("truncation report bounds shrink with T") {
    const auto k = power_law_kernel(0.3);
    const auto a = truncation_report(k, 1.0, 100.0, 3);
    const auto b = truncation_report(k, 1.0, 1000.0, 3);
    CHECK(b.l2_tail < a.l2_tail);
    CHECK(a.bias_bound.size() == 4);
    CHECK(a.bias_bound[3] >= a.bias_bound[0]);
}
