#include "lrdcma/mc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "lrdcma/error.hpp"
#include "lrdcma/parallel.hpp"

namespace lrdcma {

namespace {

long max_lag(const ExperimentConfig& cfg) {
    long h = cfg.statistic == Statistic::d_hat_error ? 1 : 0;
    for (long l : cfg.lags) h = std::max(h, l);
    return h;
}

std::vector<long> effective_lags(const ExperimentConfig& cfg) {
    if (cfg.statistic == Statistic::d_hat_error) return {1};
    if (cfg.lags.empty()) throw ParameterError("experiment: no lags given");
    for (long l : cfg.lags)
        if (l < 0) throw ParameterError("experiment: lags must be nonnegative");
    return cfg.lags;
}

std::vector<double> target_gammas(const ExperimentConfig& cfg, const Kernel& k, long H) {
    const double sigma2 = variance(cfg.model);
    if (cfg.target == Target::step) return step_autocovariance_sequence(k, sigma2, cfg.grid.m, H);
    std::vector<double> g(static_cast<std::size_t>(H + 1));
    for (long h = 0; h <= H; ++h) g[static_cast<std::size_t>(h)] = autocovariance(k, sigma2, static_cast<double>(h));
    return g;
}

double default_exponent(Regime r, double d, const LevyModel& m) {
    switch (r) {
        case Regime::gaussian: return 0.5;
        case Regime::rosenblatt: return 1.0 - 2.0 * d;
        case Regime::stable: return 1.0 - 2.0 / m.alpha;
        case Regime::boundary: return 0.5;
    }
    return 0.5;
}

Scaling default_scaling(Regime r, double d) {
    switch (r) {
        case Regime::gaussian: return std::abs(d - 0.25) <= 1e-12 ? Scaling::sqrt_n_over_log : Scaling::sqrt_n;
        case Regime::rosenblatt: return Scaling::n_pow;
        case Regime::stable: return Scaling::n_over_aN2;
        case Regime::boundary: return Scaling::sqrt_n;
    }
    return Scaling::sqrt_n;
}

// Linear map from (gamma_hat(h) - gamma(h), gamma_hat(0) - gamma(0)) errors to the statistic's error.
struct DeltaMap {
    double w_h = 1.0;
    double w_0 = 0.0;
};

DeltaMap delta_map(Statistic s, long h, const std::vector<double>& g) {
    DeltaMap m;
    if (s == Statistic::acf_error || s == Statistic::d_hat_error) {
        const double rho = g[static_cast<std::size_t>(h)] / g[0];
        m.w_h = 1.0 / g[0];
        m.w_0 = -rho / g[0];
        if (s == Statistic::d_hat_error) {
            const double f = 1.0 / (2.0 * std::log(2.0) * (1.0 + rho));
            m.w_h *= f;
            m.w_0 *= f;
        }
    }
    return m;
}

std::vector<double> match_median_iqr(std::vector<double> ref, const std::vector<double>& sample) {
    const double mr = quantile(ref, 0.5);
    const double ir = quantile(ref, 0.75) - quantile(ref, 0.25);
    const double ms = quantile(sample, 0.5);
    const double is = quantile(sample, 0.75) - quantile(sample, 0.25);
    for (auto& x : ref) x = (x - mr) / ir * is + ms;
    return ref;
}

double normal_cdf(double x, double mean, double sd) {
    return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0)));
}

}  // namespace

std::string to_string(Statistic s) {
    switch (s) {
        case Statistic::acv_error: return "acv_error";
        case Statistic::acf_error: return "acf_error";
        case Statistic::d_hat_error: return "d_hat_error";
        case Statistic::diag_part: return "diag_part";
        case Statistic::offdiag_part: return "offdiag_part";
    }
    return "acv_error";
}

Statistic statistic_from_string(const std::string& s) {
    if (s == "acv_error") return Statistic::acv_error;
    if (s == "acf_error") return Statistic::acf_error;
    if (s == "d_hat_error") return Statistic::d_hat_error;
    if (s == "diag_part") return Statistic::diag_part;
    if (s == "offdiag_part") return Statistic::offdiag_part;
    throw ParameterError("unknown statistic '" + s + "'");
}

std::string to_string(Centering c) { return c == Centering::b_N ? "b_N" : "sigma2"; }

Centering centering_from_string(const std::string& s) {
    if (s == "b_N") return Centering::b_N;
    if (s == "sigma2") return Centering::sigma2;
    throw ParameterError("unknown centering '" + s + "'");
}

std::string to_string(Target t) { return t == Target::step ? "step" : "continuous"; }

Target target_from_string(const std::string& s) {
    if (s == "step") return Target::step;
    if (s == "continuous") return Target::continuous;
    throw ParameterError("unknown target '" + s + "'");
}

double quantile(std::vector<double> v, double q) {
    if (v.empty()) throw ParameterError("quantile of an empty sample");
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= v.size()) return v.back();
    return v[i] + (pos - static_cast<double>(i)) * (v[i + 1] - v[i]);
}

EmpiricalDistribution make_distribution(std::vector<double> values, std::string config_hash, std::uint64_t seed) {
    EmpiricalDistribution e;
    std::sort(values.begin(), values.end());
    e.R = values.size();
    e.values = std::move(values);
    e.config_hash = std::move(config_hash);
    e.seed = seed;
    return e;
}

EmpiricalDistribution ExperimentResult::distribution(std::size_t lag_index, const ExperimentConfig& cfg) const {
    return make_distribution(scaled.at(lag_index), cfg.config_hash, cfg.seed);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    const Kernel kernel(cfg.kernel);
    if (kernel.test_only()) throw ParameterError("experiment: the indicator kernel is for tests only");
    cfg.model.validate();
    ExperimentResult res;
    res.lags = effective_lags(cfg);
    res.regime = classify_regime(kernel.d(), cfg.model);
    if (res.regime == Regime::boundary && !cfg.override_boundary) {
        const auto law = theoretical_limits(kernel, cfg.model, 0);
        throw ParameterError("boundary regime (" + law.reason +
                             "); set experiment.override_boundary = true to run it anyway");
    }
    if (cfg.replicates < 1) throw ParameterError("experiment: replicates must be positive");

    SimulationGrid grid = cfg.grid;
    const long H = max_lag(cfg);
    grid.H = std::max(grid.H, H);
    const bool needs_stream = cfg.statistic == Statistic::diag_part || cfg.statistic == Statistic::offdiag_part;
    if (needs_stream) {
        grid.far_past = false;
        grid.retain_increments = true;
    }
    const long N = grid.N;
    res.targets = target_gammas(cfg, kernel, H);

    res.scaling = cfg.scaling.value_or(default_scaling(res.regime, kernel.d()));
    res.exponent = cfg.exponent.value_or(default_exponent(res.regime, kernel.d(), cfg.model));
    const bool need_a = res.scaling == Scaling::n_over_aN2 || (needs_stream && cfg.centering == Centering::b_N);
    if (need_a) {
        res.a_N = norming_a(cfg.model, N, cfg.norming_budget, derive_seed(cfg.seed, 0xa0)).a_mc;
        if (needs_stream && cfg.centering == Centering::b_N)
            res.b = norming_b(cfg.model, res.a_N, N, cfg.norming_budget, derive_seed(cfg.seed, 0xb0)).b_N;
    }
    if (needs_stream && cfg.centering == Centering::sigma2) res.b = variance(cfg.model);
    const double Nd = static_cast<double>(N);
    switch (res.scaling) {
        case Scaling::n_pow: res.scale = std::pow(Nd, res.exponent); break;
        case Scaling::n_over_aN2:
            if (!(res.a_N > 0.0)) throw NumericError("experiment: a_N = 0, scaling N / a_N^2 undefined");
            res.scale = Nd / (res.a_N * res.a_N);
            break;
        case Scaling::sqrt_n: res.scale = std::sqrt(Nd); break;
        case Scaling::sqrt_n_over_log:
            if (N < 2) throw ParameterError("experiment: sqrt(N / log N) needs N >= 2");
            res.scale = std::sqrt(Nd / std::log(Nd));
            break;
    }

    const Simulator sim(kernel, cfg.model, grid);
    const std::uint64_t stream_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(N));
    const std::size_t R = cfg.replicates;
    const std::size_t L = res.lags.size();
    res.raw.assign(L, std::vector<double>(R));
    res.scaled.assign(L, std::vector<double>(R));
    const auto& g = res.targets;
    parallel_for(R, cfg.threads, [&](std::size_t r) {
        const SamplePath path = sim.simulate(stream_seed, r);
        const auto acv = sample_acv(path.values, N, H);
        for (std::size_t j = 0; j < L; ++j) {
            const long h = res.lags[j];
            const auto hs = static_cast<std::size_t>(h);
            double v = 0.0;
            switch (cfg.statistic) {
                case Statistic::acv_error: v = acv.gamma_hat[hs] - g[hs]; break;
                case Statistic::acf_error: v = acv.gamma_hat[hs] / acv.gamma_hat[0] - g[hs] / g[0]; break;
                case Statistic::d_hat_error:
                    v = estimate_d(acv.gamma_hat[1] / acv.gamma_hat[0]).value - kernel.d();
                    break;
                case Statistic::diag_part: v = decompose(path, kernel, h, res.b).diagonal; break;
                case Statistic::offdiag_part: v = decompose(path, kernel, h, res.b).off_diagonal; break;
            }
            res.raw[j][r] = v;
            res.scaled[j][r] = res.scale * v;
        }
    });
    return res;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw ParameterError("ks_two_sample: empty sample");
    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double best = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        best = std::max(best, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    return best;
}

double ks_one_sample(std::span<const double> a, const std::function<double(double)>& cdf) {
    if (a.empty()) throw ParameterError("ks_one_sample: empty sample");
    std::vector<double> x(a.begin(), a.end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double best = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double F = cdf(x[i]);
        best = std::max({best, static_cast<double>(i + 1) / n - F, F - static_cast<double>(i) / n});
    }
    return best;
}

double hill_tail_index(std::span<const double> sample, std::size_t k_top) {
    if (k_top < 1 || k_top >= sample.size()) throw ParameterError("hill_tail_index: need 1 <= k_top < sample size");
    std::vector<double> x(sample.size());
    std::transform(sample.begin(), sample.end(), x.begin(), [](double v) { return std::abs(v); });
    std::nth_element(x.begin(), x.begin() + static_cast<long>(k_top), x.end(), std::greater<>());
    const double threshold = x[k_top];
    if (!(threshold > 0.0)) throw NumericError("hill_tail_index: too few positive order statistics");
    double s = 0.0;
    for (std::size_t i = 0; i < k_top; ++i) s += std::log(x[i] / threshold);
    if (!(s > 0.0)) throw NumericError("hill_tail_index: degenerate sample (no spread in the upper tail)");
    return static_cast<double>(k_top) / s;
}

RateEstimate rate_regression(const std::map<long, std::vector<double>>& unscaled) {
    if (unscaled.size() < 3) throw ParameterError("rate_regression: needs at least three values of N");
    if (unscaled.rbegin()->first < 4 * unscaled.begin()->first)
        throw ParameterError("rate_regression: N values must span at least two octaves");
    RateEstimate out;
    for (const auto& [N, v] : unscaled) {
        const double spread = quantile(v, 0.75) - quantile(v, 0.25);
        if (!(spread > 0.0)) throw NumericError("rate_regression: degenerate spread at N = " + std::to_string(N));
        out.log_N.push_back(std::log(static_cast<double>(N)));
        out.log_iqr.push_back(std::log(spread));
    }
    const std::size_t n = out.log_N.size();
    const double mx = std::accumulate(out.log_N.begin(), out.log_N.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(out.log_iqr.begin(), out.log_iqr.end(), 0.0) / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (out.log_N[i] - mx) * (out.log_N[i] - mx);
        sxy += (out.log_N[i] - mx) * (out.log_iqr[i] - my);
    }
    const double slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = out.log_iqr[i] - my - slope * (out.log_N[i] - mx);
        rss += e * e;
    }
    out.exponent = -slope;
    out.std_error = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    const boost::math::students_t t(static_cast<double>(n - 2));
    const double q = boost::math::quantile(t, 0.975);
    out.ci_low = out.exponent - q * out.std_error;
    out.ci_high = out.exponent + q * out.std_error;
    return out;
}

Eigen::MatrixXd cross_lag_coupling(const std::vector<std::vector<double>>& per_lag) {
    const auto L = static_cast<Eigen::Index>(per_lag.size());
    if (L == 0) throw ParameterError("cross_lag_coupling: no lags");
    const std::size_t R = per_lag[0].size();
    for (const auto& v : per_lag)
        if (v.size() != R || R < 2) throw ParameterError("cross_lag_coupling: lags need the same replicates");
    Eigen::MatrixXd X(static_cast<Eigen::Index>(R), L);
    for (Eigen::Index j = 0; j < L; ++j)
        for (std::size_t r = 0; r < R; ++r) X(static_cast<Eigen::Index>(r), j) = per_lag[static_cast<std::size_t>(j)][r];
    const Eigen::MatrixXd C = X.rowwise() - X.colwise().mean();
    const Eigen::MatrixXd cov = C.transpose() * C;
    Eigen::MatrixXd corr(L, L);
    for (Eigen::Index i = 0; i < L; ++i)
        for (Eigen::Index j = 0; j < L; ++j) corr(i, j) = cov(i, j) / std::sqrt(cov(i, i) * cov(j, j));
    return corr;
}

std::vector<double> limit_reference_draws(const ExperimentConfig& cfg, long lag, std::size_t n, std::uint64_t seed) {
    const Kernel kernel(cfg.kernel);
    const Regime regime = classify_regime(kernel.d(), cfg.model);
    const long H = std::max(lag, 1L);
    const auto g = target_gammas(cfg, kernel, H);
    const DeltaMap dm = delta_map(cfg.statistic, lag, g);
    if (regime == Regime::rosenblatt) {
        const double coef = kernel.C_d() * kernel.C_d() * variance(cfg.model);
        const double w = cfg.statistic == Statistic::acv_error || cfg.statistic == Statistic::offdiag_part
                             ? 1.0
                             : dm.w_h + dm.w_0;
        RosenblattSampler sampler(kernel.d());
        auto draws = sampler.draws(n, seed, cfg.threads);
        for (auto& x : draws) x *= coef * w;
        return draws;
    }
    if (regime == Regime::stable) {
        const StableParams sp = stable_limit_params(cfg.model, 1.0);
        const int m = cfg.target == Target::step ? cfg.grid.m : 0;
        const long n_grid = 512;
        auto gh = GdmSampler::grid_values(kernel, lag, n_grid, m);
        if (dm.w_0 != 0.0) {
            const auto g0 = GdmSampler::grid_values(kernel, 0, n_grid, m);
            for (std::size_t i = 0; i < gh.size(); ++i) gh[i] = dm.w_h * gh[i] + dm.w_0 * g0[i];
        }
        return GdmSampler(gh, sp).draws(n, seed, cfg.threads);
    }
    throw ParameterError("limit_reference_draws: no sampled limit for regime " + to_string(regime));
}

LimitComparison compare_to_limits(const ExperimentConfig& cfg, const ExperimentResult& res, std::size_t lag_index) {
    const auto& sample = res.scaled.at(lag_index);
    const long lag = res.lags.at(lag_index);
    const Kernel kernel(cfg.kernel);
    LimitComparison out;
    out.regime = res.regime;
    const std::size_t n_ref = cfg.reference_draws;
    const std::uint64_t ref_seed = derive_seed(cfg.seed, 0x5e7);

    // Gaussian
    if (res.regime == Regime::gaussian) {
        LimitOptions lo;
        lo.mesh = cfg.target == Target::step ? cfg.grid.m : 0;
        const long H = std::max(lag, cfg.statistic == Statistic::acv_error ? lag : 1L);
        const auto law = theoretical_limits(kernel, cfg.model, H, lo);
        const auto g = target_gammas(cfg, kernel, H);
        const DeltaMap dm = delta_map(cfg.statistic, lag, g);
        const double vhh = law.V(lag, lag), v00 = law.V(0, 0), vh0 = law.V(lag, 0);
        const double var = dm.w_h * dm.w_h * vhh + 2.0 * dm.w_h * dm.w_0 * vh0 + dm.w_0 * dm.w_0 * v00;
        const double sd = std::sqrt(var);
        out.ks_to_gaussian = ks_one_sample(sample, [sd](double x) { return normal_cdf(x, 0.0, sd); });
    } else {
        const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / static_cast<double>(sample.size());
        double ss = 0.0;
        for (double x : sample) ss += (x - mean) * (x - mean);
        const double sd = std::sqrt(ss / static_cast<double>(sample.size() - 1));
        out.ks_to_gaussian = ks_one_sample(sample, [mean, sd](double x) { return normal_cdf(x, mean, sd); });
    }

    // Rosenblatt
    if (res.regime == Regime::rosenblatt) {
        out.ks_to_rosenblatt = ks_two_sample(sample, limit_reference_draws(cfg, lag, n_ref, ref_seed));
    } else {
        const double d_ref = kernel.d() > 0.25 ? kernel.d() : 0.35;
        RosenblattSampler sampler(d_ref);
        out.ks_to_rosenblatt =
            ks_two_sample(sample, match_median_iqr(sampler.draws(n_ref, ref_seed, cfg.threads), sample));
    }

    // stable
    if (res.regime == Regime::stable) {
        out.ks_to_stable = ks_two_sample(sample, limit_reference_draws(cfg, lag, n_ref, ref_seed));
    } else {
        const bool heavy = cfg.model.has_jumps() && !fourth_moment(cfg.model).finite && cfg.model.alpha < 4.0;
        const double p = heavy ? cfg.model.alpha / 2.0 : 1.25;
        std::vector<double> ref(n_ref);
        Rng rng = make_rng(ref_seed, 7);
        for (auto& x : ref) x = sample_stable(p, 1.0, 1.0, 0.0, rng);
        out.ks_to_stable = ks_two_sample(sample, match_median_iqr(std::move(ref), sample));
    }

    out.hill_k = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(cfg.hill_fraction * static_cast<double>(sample.size()))));
    if (out.hill_k < sample.size()) out.hill_index = hill_tail_index(sample, out.hill_k);
    return out;
}

}  // namespace lrdcma
