#include "lrdcma/limits.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/beta.hpp>

#include "lrdcma/error.hpp"
#include "lrdcma/parallel.hpp"

namespace lrdcma {

namespace {

// int_{x-1}^{x} u^(d-1) du for x >= 1, without cancellation for large x.
double cell_weight(double x, double d) {
    if (x <= 1.0) return std::pow(std::max(x, 0.0), d) / d;
    return -std::pow(x, d) * std::expm1(d * std::log1p(-1.0 / x)) / d;
}

double quantile_sorted(const std::vector<double>& s, double q) {
    const double pos = q * static_cast<double>(s.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    if (i + 1 >= s.size()) return s.back();
    return s[i] + frac * (s[i + 1] - s[i]);
}

double iqr(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return quantile_sorted(v, 0.75) - quantile_sorted(v, 0.25);
}

}  // namespace

std::string to_string(RosenblattKernelForm f) {
    return f == RosenblattKernelForm::cell_average ? "cell_average" : "pure_power";
}

RosenblattKernelForm rosenblatt_form_from_string(const std::string& s) {
    if (s == "cell_average") return RosenblattKernelForm::cell_average;
    if (s == "pure_power") return RosenblattKernelForm::pure_power;
    throw ParameterError("unknown Rosenblatt kernel form '" + s + "'");
}

double rosenblatt_variance(double d) {
    if (!(d > 0.25 && d < 0.5)) throw ParameterError("rosenblatt_variance: d must lie in (1/4, 1/2)");
    const double b = boost::math::beta(d, 1.0 - 2.0 * d);
    return b * b / (d * (4.0 * d - 1.0));
}

RosenblattSampler::RosenblattSampler(double d, RosenblattOptions opt) : d_(d), opt_(opt) {
    if (!(d > 0.0 && d < 0.5)) throw ParameterError("d must lie in (0, 0.5)");
    if (opt_.n_grid < 64) throw ParameterError("Rosenblatt sampler: n_grid must be at least 64");
    if (opt_.horizon < 1) throw ParameterError("Rosenblatt sampler: horizon must be positive");
    if (opt_.window < 0) throw ParameterError("Rosenblatt sampler: window must be nonnegative");
    const long n = opt_.n_grid;
    Kw_ = opt_.window > 0 ? opt_.window : 32 * n;
    T_ = opt_.horizon * n;
    const long W = Kw_ + T_;
    norm_ = std::pow(static_cast<double>(n), -2.0 * d);
    window_tail_ = std::pow(static_cast<double>(Kw_) / static_cast<double>(n), 2.0 * d - 1.0) / (1.0 - 2.0 * d);

    const bool cell = opt_.form == RosenblattKernelForm::cell_average;
    auto weight = [d, cell](double x) { return cell ? cell_weight(x, d) : std::pow(x, d - 1.0); };
    coef_.assign(static_cast<std::size_t>(W + 1), 0.0);
    for (long j = 1; j <= W; ++j) coef_[static_cast<std::size_t>(j)] = weight(static_cast<double>(j));

    std::vector<double> prefix(coef_.size(), 0.0);
    for (std::size_t j = 1; j < coef_.size(); ++j) prefix[j] = prefix[j - 1] + coef_[j] * coef_[j];
    diag_.resize(static_cast<std::size_t>(W));
    for (long i = 0; i < W; ++i) {
        const long k = i - Kw_;
        diag_[static_cast<std::size_t>(i)] =
            prefix[static_cast<std::size_t>(T_ - k)] - prefix[static_cast<std::size_t>(std::max(0L, -k))];
    }
    conv_ = std::make_unique<FftConvolver>(coef_, static_cast<std::size_t>(W));

    if (opt_.far_past) {
        FarPastField::Options fo;
        fo.tail_tol = 1e-8;
        const double e = 2.0 * d - 1.0;
        far_ = std::make_unique<FarPastField>(weight, [e](double D) { return std::pow(D, e) / -e; }, 1.0,
                                              -static_cast<long long>(Kw_), 1.0, static_cast<double>(T_), fo);
        for (long t = 1; t <= T_; ++t) far_mean_ += far_->diagonal_mass(static_cast<double>(t));
    }
}

RosenblattSampler::~RosenblattSampler() = default;

double RosenblattSampler::far_residual() const noexcept { return far_ ? far_->residual() : window_tail_; }

double RosenblattSampler::draw(Rng& rng) const {
    const std::size_t W = diag_.size();
    std::normal_distribution<double> norm(0.0, 1.0);
    std::vector<double> z(W);
    for (auto& v : z) v = norm(rng);
    std::vector<double> y(W + 1);
    conv_->apply(z, y);

    std::vector<double> far_nodes;
    if (far_) {
        const auto& counts = far_->block_counts();
        std::vector<double> A(counts.size());
        for (std::size_t b = 0; b < A.size(); ++b) A[b] = std::sqrt(counts[b]) * norm(rng);
        far_nodes = far_->node_values(A);
    }
    double sq = 0.0;
    for (long t = 1; t <= T_; ++t) {
        double Y = y[static_cast<std::size_t>(t + Kw_)];
        if (far_) Y += far_->evaluate(far_nodes, static_cast<double>(t));
        sq += Y * Y;
    }
    double diag = 0.0;
    for (std::size_t i = 0; i < W; ++i) diag += diag_[i] * z[i] * z[i];
    return norm_ * (sq - diag - far_mean_);
}

double RosenblattSampler::draw(std::uint64_t seed, std::uint64_t index) const {
    Rng rng = make_rng(seed, index);
    return draw(rng);
}

std::vector<double> RosenblattSampler::draws(std::size_t n, std::uint64_t seed, int threads) const {
    std::vector<double> out(n);
    parallel_for(n, threads, [&](std::size_t i) { out[i] = draw(seed, i); });
    return out;
}

double sample_rosenblatt(double d, long n_grid, std::uint64_t seed) {
    RosenblattOptions o;
    o.n_grid = n_grid;
    return RosenblattSampler(d, o).draw(seed, 0);
}

double sample_stable(double alpha, double tau, double beta, double mu, Rng& rng) {
    if (!(alpha > 0.0 && alpha <= 2.0)) throw ParameterError("sample_stable: alpha must lie in (0, 2]");
    if (!(tau >= 0.0)) throw ParameterError("sample_stable: tau must be nonnegative");
    if (!(beta >= -1.0 && beta <= 1.0)) throw ParameterError("sample_stable: beta must lie in [-1, 1]");
    if (!std::isfinite(mu)) throw ParameterError("sample_stable: mu must be finite");
    std::uniform_real_distribution<double> unif(-M_PI / 2.0, M_PI / 2.0);
    std::exponential_distribution<double> expo(1.0);
    double V = unif(rng);
    while (V == -M_PI / 2.0) V = unif(rng);
    const double W = expo(rng);
    if (alpha == 1.0) {
        const double a = M_PI / 2.0 + beta * V;
        const double X = (2.0 / M_PI) * (a * std::tan(V) - beta * std::log((M_PI / 2.0) * W * std::cos(V) / a));
        const double shift = tau > 0.0 ? (2.0 / M_PI) * beta * tau * std::log(tau) : 0.0;
        return tau * X + shift + mu;
    }
    const double t = beta * std::tan(M_PI * alpha / 2.0);
    const double B = std::atan(t) / alpha;
    const double S = std::pow(1.0 + t * t, 1.0 / (2.0 * alpha));
    const double X = S * std::sin(alpha * (V + B)) / std::pow(std::cos(V), 1.0 / alpha) *
                     std::pow(std::cos(V - alpha * (V + B)) / W, (1.0 - alpha) / alpha);
    return tau * X + mu;
}

double sample_stable(double alpha, double tau, double beta, double mu, std::uint64_t seed) {
    Rng rng(seed);
    return sample_stable(alpha, tau, beta, mu, rng);
}

double stable_constant(double p) {
    if (!(p > 0.0 && p < 2.0) || p == 1.0) throw ParameterError("stable_constant: p must lie in (0, 2), p != 1");
    return (1.0 - p) / (std::tgamma(2.0 - p) * std::cos(M_PI * p / 2.0));
}

StableParams stable_limit_params(const LevyModel& model, double epsilon) {
    model.validate();
    if (!model.has_jumps() || model.brownian_sd != 0.0 || model.bounded_jumps || !(model.alpha > 2.0) ||
        !(model.alpha < 4.0))
        throw ParameterError(
            "stable limit needs a pure-jump model with unbounded symmetric jumps and alpha in (2, 4)");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ParameterError("epsilon must lie in (0, 1]");
    StableParams p;
    p.alpha_half = model.alpha / 2.0;
    p.drift = model.alpha / (model.alpha - 2.0);
    p.tau = std::pow(epsilon, 1.0 / p.alpha_half) * std::pow(stable_constant(p.alpha_half), -1.0 / p.alpha_half);
    p.beta = 1.0;
    p.mu = epsilon * p.drift;
    return p;
}

TauCheck tau_monte_carlo(const LevyModel& model, long long N, std::size_t replicates, std::uint64_t seed) {
    const StableParams sp = stable_limit_params(model, 1.0);
    if (N < 2 || replicates < 100) throw ParameterError("tau_monte_carlo: need N >= 2 and at least 100 replicates");
    const auto a = norming_a(model, N, 200000, derive_seed(seed, 1));
    const auto b = norming_b(model, a.a_mc, N, 200000, derive_seed(seed, 2));
    const double a2 = a.a_mc * a.a_mc;
    std::vector<double> sums(replicates);
    std::vector<double> buf(static_cast<std::size_t>(N));
    for (std::size_t r = 0; r < replicates; ++r) {
        Rng rng = make_rng(seed, 100 + r);
        fill_increments(model, 1.0, buf, rng);
        double s = 0.0;
        for (double v : buf) s += v * v - b.b_N;
        sums[r] = s / a2;
    }
    std::vector<double> ref(200000);
    Rng rng = make_rng(seed, 3);
    for (auto& v : ref) v = sample_stable(sp.alpha_half, 1.0, 1.0, 0.0, rng);
    TauCheck out;
    out.tau_analytic = sp.tau;
    out.tau_mc = iqr(sums) / iqr(ref);
    out.relative_gap = std::abs(out.tau_mc / out.tau_analytic - 1.0);
    out.ok = out.relative_gap <= 0.15;
    return out;
}

GdmSampler::GdmSampler(std::vector<double> g_values, StableParams params) : g_(std::move(g_values)), p_(params) {
    if (g_.empty()) throw ParameterError("GdmSampler: empty grid");
    if (!(p_.alpha_half > 1.0 && p_.alpha_half < 2.0)) throw ParameterError("GdmSampler: alpha/2 must lie in (1, 2)");
    if (!(p_.tau >= 0.0) || !(p_.beta >= -1.0 && p_.beta <= 1.0)) throw ParameterError("GdmSampler: bad parameters");
}

std::vector<double> GdmSampler::grid_values(const Kernel& kernel, long h, long n_grid, int m) {
    if (n_grid < 1) throw ParameterError("GdmSampler: n_grid must be positive");
    std::vector<double> g(static_cast<std::size_t>(n_grid));
    if (m > 0) {
        const auto cells = G_step_cells(kernel, m, h);
        for (long i = 0; i < n_grid; ++i) {
            const double s = (static_cast<double>(i) + 0.5) / static_cast<double>(n_grid);
            g[static_cast<std::size_t>(i)] = cells[static_cast<std::size_t>(std::min<long>(m - 1, static_cast<long>(s * m)))];
        }
        return g;
    }
    for (long i = 0; i < n_grid; ++i)
        g[static_cast<std::size_t>(i)] = G(kernel, h, (static_cast<double>(i) + 0.5) / static_cast<double>(n_grid)).value;
    return g;
}

double GdmSampler::draw(Rng& rng) const {
    const double ds = 1.0 / static_cast<double>(g_.size());
    const double scale = p_.tau * std::pow(ds, 1.0 / p_.alpha_half);
    double s = 0.0;
    for (double g : g_) {
        const double dK = sample_stable(p_.alpha_half, scale, p_.beta, p_.mu * ds, rng);
        s += g * (dK - p_.drift * ds);
    }
    return s;
}

std::vector<double> GdmSampler::draws(std::size_t n, std::uint64_t seed, int threads) const {
    std::vector<double> out(n);
    parallel_for(n, threads, [&](std::size_t i) {
        Rng rng = make_rng(seed, i);
        out[i] = draw(rng);
    });
    return out;
}

double sample_integral_GdM(const Kernel& kernel, long h, const StableParams& params, long n_grid, std::uint64_t seed) {
    GdmSampler s(GdmSampler::grid_values(kernel, h, n_grid), params);
    Rng rng(seed);
    return s.draw(rng);
}

}  // namespace lrdcma
