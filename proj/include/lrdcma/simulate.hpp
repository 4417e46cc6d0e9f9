#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lrdcma/far_past.hpp"
#include "lrdcma/fft.hpp"
#include "lrdcma/kernel.hpp"
#include "lrdcma/levy.hpp"

namespace lrdcma {

enum class ConvolutionMethod { automatic, direct, fft };

[[nodiscard]] std::string to_string(ConvolutionMethod m);
[[nodiscard]] ConvolutionMethod convolution_method_from_string(const std::string& s);

/**
 * @brief Discretization of the moving average: mesh eps = 1/m, observations t = 1..N+H.
 *
 * The increment stream Z_k = L(eps k) - L(eps (k-1)) covers k = m - K .. m (N+H), so
 * X_t = sum_{i=0}^{K} f(eps i) Z_{m t - i} is available for every t. With `far_past`
 * each X_t also receives every older stream increment and a block-aggregated
 * contribution of the infinite past, so the path is (up to block error) stationary
 * with the autocovariance of the step kernel.
 */
struct SimulationGrid {
    int m = 1;
    long N = 1024;
    long H = 0;
    long long K_trunc = 0;  // 0 selects m (N + H), the smallest admissible value
    bool retain_increments = false;
    bool far_past = true;
    ConvolutionMethod method = ConvolutionMethod::automatic;
    double truncation_budget = std::numeric_limits<double>::infinity();

    [[nodiscard]] double epsilon() const noexcept { return 1.0 / m; }
    [[nodiscard]] long long K() const noexcept { return K_trunc > 0 ? K_trunc : static_cast<long long>(m) * (N + H); }
    [[nodiscard]] long long k_min() const noexcept { return m - K(); }
    [[nodiscard]] long long stream_length() const noexcept { return static_cast<long long>(m) * (N + H - 1) + K() + 1; }
    // Index into the stream of Z_{m t}, i.e. the newest increment used by X_t.
    [[nodiscard]] long long position(long t) const noexcept { return static_cast<long long>(m) * (t - 1) + K(); }
    void validate() const;
};

struct SamplePath {
    std::vector<double> values;      // X_1 .. X_{N+H}
    std::vector<double> increments;  // stream Z_{k_min} .. Z_{m(N+H)}; empty unless retained
    std::vector<double> far;         // far-past part of each X_t; empty without far_past
    SimulationGrid grid;

    [[nodiscard]] bool has_increments() const noexcept { return !increments.empty(); }
    [[nodiscard]] long N() const noexcept { return grid.N; }
};

class Simulator {
public:
    /**
     * @throws ParameterError on invalid grid or model.
     * @throws ConfigError when the truncation error exceeds grid.truncation_budget.
     */
    Simulator(Kernel kernel, LevyModel model, SimulationGrid grid);
    Simulator(const Simulator&) = delete;
    Simulator& operator=(const Simulator&) = delete;

    // One replicate, driven by the stream derive_seed(seed, replicate).
    [[nodiscard]] SamplePath simulate(std::uint64_t seed, std::uint64_t replicate = 0) const;

    // X_t from a given stream only (no far past), by the requested method.
    [[nodiscard]] std::vector<double> values_from_stream(std::span<const double> z, ConvolutionMethod method) const;

    [[nodiscard]] const SimulationGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] const Kernel& kernel() const noexcept { return kernel_; }
    [[nodiscard]] const LevyModel& model() const noexcept { return model_; }
    [[nodiscard]] const std::vector<double>& coefficients() const noexcept { return c_; }
    [[nodiscard]] ConvolutionMethod resolved_method() const noexcept { return method_; }
    [[nodiscard]] const FarPastField* far_field() const noexcept { return far_.get(); }

private:
    void convolve(std::span<const double> z, std::span<double> out, ConvolutionMethod method,
                  std::size_t taps) const;

    Kernel kernel_;
    LevyModel model_;
    SimulationGrid grid_;
    std::vector<double> c_;
    ConvolutionMethod method_ = ConvolutionMethod::direct;
    std::unique_ptr<FftConvolver> fft_;
    std::unique_ptr<FarPastField> far_;
};

[[nodiscard]] SamplePath simulate_path(const Kernel& kernel, const LevyModel& model, const SimulationGrid& grid,
                                       std::uint64_t seed);

/**
 * @brief Split of gamma_hat(h) into the k = k' terms and the rest.
 *
 * diagonal = (1/N) sum_t sum_i f(eps i) f(eps i + h) (Z_{mt-i}^2 - eps b), centering =
 * eps b sum_i f(eps i) f(eps i + h), off_diagonal = gamma_hat - diagonal - centering.
 * Pass b = b_N or b = sigma^2 for the two centerings.
 */
struct Decomposition {
    double diagonal = 0.0;
    double off_diagonal = 0.0;
    double centering = 0.0;
    double gamma_hat = 0.0;
};

/**
 * @throws StateError when the path has no retained increments or was simulated with far_past.
 */
[[nodiscard]] Decomposition decompose(const SamplePath& path, const Kernel& kernel, long h, double b);

struct TruncationReport {
    double T = 0.0;        // eps * K_trunc
    double l2_tail = 0.0;  // sigma^2 int_T^inf f^2
    std::vector<double> bias_bound;  // per lag h = 0..H
    double far_residual = 0.0;       // uncovered squared mass when the far past is simulated
};

[[nodiscard]] TruncationReport truncation_report(const Kernel& kernel, double sigma2, double T, long H);
[[nodiscard]] TruncationReport truncation_report(const Kernel& kernel, double sigma2, const SimulationGrid& grid);

// Binary increment dump: "LRDC", u32 version (1), u32 m, u64 count, count little-endian f64.
void write_increment_dump(const std::string& path, int m, std::span<const double> values);
void write_increment_dump(std::ostream& os, int m, std::span<const double> values);
[[nodiscard]] std::vector<double> read_increment_dump(const std::string& path, int* m = nullptr);

}  // namespace lrdcma
