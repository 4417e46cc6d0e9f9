#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lrdcma/estimate.hpp"
#include "lrdcma/kernel.hpp"
#include "lrdcma/levy.hpp"
#include "lrdcma/limits.hpp"
#include "lrdcma/simulate.hpp"

namespace lrdcma {

enum class Statistic { acv_error, acf_error, d_hat_error, diag_part, offdiag_part };
enum class Centering { b_N, sigma2 };
enum class Target { step, continuous };

[[nodiscard]] std::string to_string(Statistic s);
[[nodiscard]] Statistic statistic_from_string(const std::string& s);
[[nodiscard]] std::string to_string(Centering c);
[[nodiscard]] Centering centering_from_string(const std::string& s);
[[nodiscard]] std::string to_string(Target t);
[[nodiscard]] Target target_from_string(const std::string& s);

struct ExperimentConfig {
    KernelSpec kernel;
    LevyModel model;
    SimulationGrid grid;
    std::size_t replicates = 200;
    Statistic statistic = Statistic::acv_error;
    std::vector<long> lags{0};             // d_hat_error always uses lag 1
    std::optional<Scaling> scaling;        // default: from the regime
    std::optional<double> exponent;        // n_pow exponent; default: from the regime
    Centering centering = Centering::b_N;  // diagonal centering for diag_part / offdiag_part
    Target target = Target::step;          // step: autocovariance of the simulated step kernel
    bool override_boundary = false;
    std::size_t norming_budget = 1'000'000;
    std::size_t reference_draws = 10'000;
    double hill_fraction = 0.025;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string config_hash;  // provenance only
};

struct EmpiricalDistribution {
    std::vector<double> values;  // sorted ascending
    std::size_t R = 0;
    std::string config_hash;
    std::uint64_t seed = 0;
};

[[nodiscard]] EmpiricalDistribution make_distribution(std::vector<double> values, std::string config_hash = {},
                                                      std::uint64_t seed = 0);

struct ExperimentResult {
    std::vector<long> lags;
    std::vector<std::vector<double>> scaled;  // [lag][replicate], replicate order
    std::vector<std::vector<double>> raw;     // unscaled statistic minus target
    std::vector<double> targets;
    double scale = 1.0;
    double a_N = 0.0;
    double b = 0.0;  // diagonal centering value actually used
    Regime regime = Regime::boundary;
    Scaling scaling = Scaling::n_pow;
    double exponent = 0.0;

    [[nodiscard]] EmpiricalDistribution distribution(std::size_t lag_index, const ExperimentConfig& cfg) const;
};

/**
 * @brief R replicates of scale(N) (statistic - target), deterministic in (config, seed).
 * @throws ParameterError for boundary regimes without override_boundary, with the reason.
 */
[[nodiscard]] ExperimentResult run_experiment(const ExperimentConfig& cfg);

// sup |F_a - F_b| by a merge of the sorted samples. @throws ParameterError on empty input.
[[nodiscard]] double ks_two_sample(std::span<const double> a, std::span<const double> b);
// sup |F_a - F| against a continuous CDF.
[[nodiscard]] double ks_one_sample(std::span<const double> a, const std::function<double(double)>& cdf);

// Hill estimate of the tail index from the k_top largest |values|.
[[nodiscard]] double hill_tail_index(std::span<const double> sample, std::size_t k_top);

struct RateEstimate {
    double exponent = 0.0;
    double std_error = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;  // 95% t interval
    std::vector<double> log_N, log_iqr;
};

// -slope of log IQR against log N. Needs at least three N spanning two octaves.
[[nodiscard]] RateEstimate rate_regression(const std::map<long, std::vector<double>>& unscaled);

// Pearson correlations across lags of replicate-aligned samples.
[[nodiscard]] Eigen::MatrixXd cross_lag_coupling(const std::vector<std::vector<double>>& per_lag);

/**
 * @brief KS distances of one lag's scaled sample to the three candidate limits.
 *
 * The law of the configured regime is used as derived (no fitting). The other two
 * serve as alternatives: a Gaussian matched by mean and standard deviation, and
 * Rosenblatt / stable shapes matched by median and IQR.
 */
struct LimitComparison {
    Regime regime = Regime::boundary;
    double ks_to_rosenblatt = 0.0;
    double ks_to_stable = 0.0;
    double ks_to_gaussian = 0.0;
    double hill_index = 0.0;
    std::size_t hill_k = 0;
};

[[nodiscard]] LimitComparison compare_to_limits(const ExperimentConfig& cfg, const ExperimentResult& res,
                                                std::size_t lag_index = 0);

// Limit-law reference draws for the configured regime (rosenblatt or stable), already scaled.
[[nodiscard]] std::vector<double> limit_reference_draws(const ExperimentConfig& cfg, long lag, std::size_t n,
                                                        std::uint64_t seed);

[[nodiscard]] double quantile(std::vector<double> v, double q);

}  // namespace lrdcma
