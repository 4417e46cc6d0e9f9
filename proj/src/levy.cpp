#include "lrdcma/levy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "lrdcma/error.hpp"

namespace lrdcma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBoundFactor = 10.0;

// P[|N(0, v)| > y]
double gaussian_two_sided_tail(double v, double y) {
    if (v <= 0.0) return y < 0.0 ? 1.0 : 0.0;
    return boost::math::erfc(y / std::sqrt(2.0 * v));
}

// E[G^2 1{|G| > y}] for G ~ N(0, v)
double gaussian_two_sided_second(double v, double y) {
    if (v <= 0.0) return 0.0;
    const double sd = std::sqrt(v);
    const double z = y / sd;
    const double phi = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
    return 2.0 * v * (z * phi + 0.5 * boost::math::erfc(z / std::sqrt(2.0)));
}

double pareto_normaliser(const LevyModel& m) {
    if (!m.bounded_jumps) return 1.0;
    return 1.0 - std::pow(kBoundFactor, -m.alpha);
}

double draw_abs_jump_above(const LevyModel& m, double u, Rng& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double lo = std::max(u, m.x0);
    const double v = 1.0 - unif(rng);  // (0, 1]
    if (!m.bounded_jumps) return lo * std::pow(v, -1.0 / m.alpha);
    const double cap = m.jump_cap();
    const double frac = 1.0 - std::pow(lo / cap, m.alpha);
    return lo * std::pow(1.0 - (1.0 - v) * frac, -1.0 / m.alpha);
}

double draw_jump(const LevyModel& m, Rng& rng) {
    const double a = draw_abs_jump_above(m, m.x0, rng);
    return (rng() & 1U) ? a : -a;
}

// Stored draws for the conditional tail estimator. For each draw with n >= 1 jumps we
// keep s = (Brownian part + all jumps but one) and M = largest modulus among the others;
// the remaining jump is the one with the largest modulus and is integrated out.
struct TailDraws {
    std::size_t total = 0;
    std::size_t no_jump = 0;
    double gauss_var = 0.0;
    std::vector<double> weight, s, M;
};

TailDraws draw_tail_sample(const LevyModel& m, std::size_t budget, std::uint64_t seed, double dt) {
    if (budget == 0) throw ParameterError("sample_budget must be positive");
    if (!(dt > 0.0)) throw ParameterError("dt must be positive");
    TailDraws out;
    out.total = budget;
    out.gauss_var = m.brownian_sd * m.brownian_sd * dt;
    if (!m.has_jumps()) {
        out.no_jump = budget;
        return out;
    }
    Rng rng(derive_seed(seed, 0x7a11));
    std::poisson_distribution<long> pois(m.jump_rate * dt);
    std::normal_distribution<double> norm(0.0, 1.0);
    const double gsd = std::sqrt(out.gauss_var);
    for (std::size_t i = 0; i < budget; ++i) {
        const long n = pois(rng);
        if (n == 0) {
            ++out.no_jump;
            continue;
        }
        double s = gsd > 0.0 ? gsd * norm(rng) : 0.0;
        double mx = 0.0;
        for (long j = 1; j < n; ++j) {
            const double J = draw_jump(m, rng);
            s += J;
            mx = std::max(mx, std::abs(J));
        }
        out.weight.push_back(static_cast<double>(n));
        out.s.push_back(s);
        out.M.push_back(mx);
    }
    return out;
}

// P[J in [lo, hi], |J| > M]
double interval_mass(const LevyModel& m, double lo, double hi, double M) {
    double mass = 0.0;
    const double a = std::max(lo, M);
    if (hi > a) mass += jump_upper_tail(m, a) - jump_upper_tail(m, hi);
    const double b = std::min(hi, -M);
    if (b > lo) mass += jump_upper_tail(m, -b) - jump_upper_tail(m, -lo);
    return mass;
}

// E[(s+J)^2 1{J in [lo, hi], |J| > M}]
double interval_second(const LevyModel& m, double s, double lo, double hi, double M) {
    double acc = 0.0;
    auto piece = [&](double a, double b, double sign) {
        const double t = jump_upper_tail(m, a) - jump_upper_tail(m, b);
        const double m1 = jump_upper_moment(m, 1, a) - jump_upper_moment(m, 1, b);
        const double m2 = jump_upper_moment(m, 2, a) - jump_upper_moment(m, 2, b);
        return s * s * t + sign * 2.0 * s * m1 + m2;
    };
    const double a = std::max(lo, M);
    if (hi > a) acc += piece(a, hi, 1.0);
    const double b = std::min(hi, -M);
    if (b > lo) acc += piece(-b, -lo, -1.0);
    return acc;
}

struct MomentPair {
    double mean = 0.0;
    double se = 0.0;
};

// Conditional estimate of P[|L| > y].
MomentPair tail_from_draws(const LevyModel& m, const TailDraws& d, double y) {
    const double base = gaussian_two_sided_tail(d.gauss_var, y);
    double sum = base * static_cast<double>(d.no_jump);
    double sum2 = base * base * static_cast<double>(d.no_jump);
    for (std::size_t i = 0; i < d.s.size(); ++i) {
        const double s = d.s[i];
        const double M = d.M[i];
        const double all = 2.0 * jump_upper_tail(m, M);
        const double inside = interval_mass(m, -y - s, y - s, M);
        const double v = d.weight[i] * std::max(0.0, all - inside);
        sum += v;
        sum2 += v * v;
    }
    const double n = static_cast<double>(d.total);
    const double mean = sum / n;
    const double var = std::max(0.0, sum2 / n - mean * mean);
    return {mean, std::sqrt(var / n)};
}

// Conditional estimate of E[L^2 1{|L| > y}].
MomentPair upper_second_from_draws(const LevyModel& m, const TailDraws& d, double y) {
    const double base = gaussian_two_sided_second(d.gauss_var, y);
    double sum = base * static_cast<double>(d.no_jump);
    double sum2 = base * base * static_cast<double>(d.no_jump);
    for (std::size_t i = 0; i < d.s.size(); ++i) {
        const double s = d.s[i];
        const double M = d.M[i];
        const double all = 2.0 * s * s * jump_upper_tail(m, M) + 2.0 * jump_upper_moment(m, 2, M);
        const double inside = interval_second(m, s, -y - s, y - s, M);
        const double v = d.weight[i] * std::max(0.0, all - inside);
        sum += v;
        sum2 += v * v;
    }
    const double n = static_cast<double>(d.total);
    const double mean = sum / n;
    const double var = std::max(0.0, sum2 / n - mean * mean);
    return {mean, std::sqrt(var / n)};
}

}  // namespace

void LevyModel::validate() const {
    if (!(brownian_sd >= 0.0) || !std::isfinite(brownian_sd)) throw ParameterError("brownian_sd must be >= 0");
    if (!(jump_rate >= 0.0) || !std::isfinite(jump_rate)) throw ParameterError("jump_rate must be >= 0");
    if (has_jumps()) {
        if (!(x0 > 0.0)) throw ParameterError("x0 must be positive");
        if (!(alpha > 0.0)) throw ParameterError("alpha must be positive");
        if (!bounded_jumps && !(alpha > 2.0))
            throw ParameterError("alpha must exceed 2 for a finite variance");
    }
    if (!(variance(*this) > 0.0)) throw ParameterError("the Levy model has zero variance");
}

double LevyModel::jump_cap() const noexcept { return bounded_jumps ? kBoundFactor * x0 : kInf; }

LevyModel brownian(double sd) {
    LevyModel m;
    m.brownian_sd = sd;
    return m;
}

LevyModel pareto_jumps(double rate, double alpha, double x0, bool bounded) {
    LevyModel m;
    m.jump_rate = rate;
    m.alpha = alpha;
    m.x0 = x0;
    m.bounded_jumps = bounded;
    return m;
}

double jump_upper_tail(const LevyModel& m, double u) {
    const double cap = m.jump_cap();
    if (u >= cap) return 0.0;
    const double lo = std::max(u, m.x0);
    const double capterm = m.bounded_jumps ? std::pow(kBoundFactor, -m.alpha) : 0.0;
    return 0.5 * (std::pow(lo / m.x0, -m.alpha) - capterm) / pareto_normaliser(m);
}

double jump_upper_moment(const LevyModel& m, int k, double u) {
    const double cap = m.jump_cap();
    if (u >= cap) return 0.0;
    const double lo = std::max(u, m.x0);
    const double a = m.alpha;
    const double pref = 0.5 * a * std::pow(m.x0, a) / pareto_normaliser(m);
    const double kk = static_cast<double>(k);
    if (!m.bounded_jumps) {
        if (kk >= a) return kInf;
        return pref * std::pow(lo, kk - a) / (a - kk);
    }
    if (std::abs(kk - a) < 1e-12) return pref * std::log(cap / lo);
    return pref * (std::pow(lo, kk - a) - std::pow(cap, kk - a)) / (a - kk);
}

double jump_abs_moment(const LevyModel& m, double k) {
    const double a = m.alpha;
    if (!m.bounded_jumps) {
        if (k >= a) return kInf;
        return a * std::pow(m.x0, k) / (a - k);
    }
    const double cap = m.jump_cap();
    const double pref = a * std::pow(m.x0, a) / pareto_normaliser(m);
    if (std::abs(k - a) < 1e-12) return pref * std::log(cap / m.x0);
    return pref * (std::pow(m.x0, k - a) - std::pow(cap, k - a)) / (a - k);
}

double variance(const LevyModel& m) {
    double v = m.brownian_sd * m.brownian_sd;
    if (m.has_jumps()) v += m.jump_rate * jump_abs_moment(m, 2.0);
    return v;
}

FourthMoment fourth_moment(const LevyModel& m) {
    FourthMoment out;
    const double s2 = variance(m);
    if (m.has_jumps()) {
        const double j4 = jump_abs_moment(m, 4.0);
        if (!std::isfinite(j4)) {
            out.finite = false;
            out.value = out.kappa4 = out.eta = kInf;
            return out;
        }
        out.kappa4 = m.jump_rate * j4;
    }
    out.value = out.kappa4 + 3.0 * s2 * s2;
    out.eta = out.value / (s2 * s2);
    return out;
}

void fill_increments(const LevyModel& m, double dt, std::span<double> out, Rng& rng) {
    const double gsd = m.brownian_sd * std::sqrt(dt);
    if (gsd > 0.0) {
        std::normal_distribution<double> norm(0.0, gsd);
        for (auto& v : out) v = norm(rng);
    } else {
        std::fill(out.begin(), out.end(), 0.0);
    }
    if (!m.has_jumps() || out.empty()) return;
    // A Poisson number of jumps placed uniformly over the steps has the same law as
    // independent Poisson(lambda*dt) counts per step.
    std::poisson_distribution<long long> pois(m.jump_rate * dt * static_cast<double>(out.size()));
    const long long count = pois(rng);
    std::uniform_int_distribution<std::size_t> where(0, out.size() - 1);
    for (long long j = 0; j < count; ++j) {
        const std::size_t i = where(rng);
        out[i] += draw_jump(m, rng);
    }
}

std::vector<double> sample_increments(const LevyModel& model, double dt, std::size_t n, std::uint64_t seed) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("dt must be positive");
    if (n == 0) throw ParameterError("n must be at least 1");
    model.validate();
    std::vector<double> out(n);
    Rng rng(derive_seed(seed, 0));
    fill_increments(model, dt, out, rng);
    return out;
}

double sample_aggregate(const LevyModel& m, double width, Rng& rng) {
    std::normal_distribution<double> norm(0.0, 1.0);
    double v = m.brownian_sd > 0.0 ? m.brownian_sd * std::sqrt(width) * norm(rng) : 0.0;
    if (!m.has_jumps()) return v;
    const double mu = m.jump_rate * width;
    if (mu <= 64.0) {
        std::poisson_distribution<long> pois(mu);
        const long n = pois(rng);
        for (long j = 0; j < n; ++j) v += draw_jump(m, rng);
        return v;
    }
    double u = m.x0 * std::pow(mu / 16.0, 1.0 / m.alpha);
    u = std::min(u, m.jump_cap());
    const double p_big = 2.0 * jump_upper_tail(m, u);
    const double small_var = mu * (jump_abs_moment(m, 2.0) - 2.0 * jump_upper_moment(m, 2, u));
    v += std::sqrt(std::max(0.0, small_var)) * norm(rng);
    if (p_big > 0.0) {
        std::poisson_distribution<long> pois(mu * p_big);
        const long n = pois(rng);
        for (long j = 0; j < n; ++j) {
            const double a = draw_abs_jump_above(m, u, rng);
            v += (rng() & 1U) ? a : -a;
        }
    }
    return v;
}

TailEstimate tail_probability(const LevyModel& model, double y, std::size_t sample_budget, std::uint64_t seed,
                              double dt) {
    if (!(y > 0.0)) throw ParameterError("y must be positive");
    model.validate();
    const TailDraws d = draw_tail_sample(model, sample_budget, seed, dt);
    const MomentPair est = tail_from_draws(model, d, y);
    TailEstimate out;
    out.probability = std::min(1.0, est.mean);
    out.std_error = est.se;
    out.asymptote = model.has_jumps() ? model.jump_rate * dt * std::pow(y / model.x0, -model.alpha)
                                      : gaussian_two_sided_tail(d.gauss_var, y);
    return out;
}

NormingA norming_a(const LevyModel& model, long long N, std::size_t sample_budget, std::uint64_t seed, double dt) {
    if (N < 1) throw ParameterError("N must be at least 1");
    model.validate();
    NormingA out;
    out.N = N;
    const double target = 1.0 / static_cast<double>(N);
    if (model.has_jumps()) {
        out.a_asym = model.x0 * std::pow(model.jump_rate * dt * static_cast<double>(N), 1.0 / model.alpha);
    } else {
        const double sd = model.brownian_sd * std::sqrt(dt);
        boost::math::normal_distribution<double> nd(0.0, sd);
        out.a_asym = N == 1 ? 0.0 : boost::math::quantile(boost::math::complement(nd, 0.5 * target));
    }
    const TailDraws d = draw_tail_sample(model, sample_budget, seed, dt);
    auto tail = [&](double y) { return tail_from_draws(model, d, y); };

    // P[|L| > 0] < 1/N means the infimum is attained at zero.
    if (tail(0.0).mean < target) {
        out.a_mc = 0.0;
        return out;
    }
    double lo = 0.0;
    double hi = std::max(out.a_asym, model.has_jumps() ? model.x0 : model.brownian_sd * std::sqrt(dt));
    if (!(hi > 0.0)) hi = 1.0;
    for (int guard = 0; tail(hi).mean >= target; ++guard) {
        lo = hi;
        hi *= 2.0;
        if (guard > 200) throw NumericError("norming_a: could not bracket the quantile");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-4 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (tail(mid).mean < target) hi = mid;
        else lo = mid;
    }
    out.a_mc = hi;
    const MomentPair at = tail(hi);
    out.rel_std_error = at.mean > 0.0 ? at.se / at.mean : 0.0;
    if (out.rel_std_error > 0.1) {
        throw NumericError("norming_a: resolution too coarse for N = " + std::to_string(N) +
                           " (relative standard error " + std::to_string(out.rel_std_error) +
                           "); increase sample_budget");
    }
    return out;
}

NormingB norming_b(const LevyModel& model, double a_N, long long N, std::size_t sample_budget, std::uint64_t seed,
                   double dt) {
    if (!(a_N >= 0.0)) throw ParameterError("a_N must be nonnegative");
    model.validate();
    NormingB out;
    if (a_N == 0.0) return out;
    const double s2 = variance(model) * dt;
    const TailDraws d = draw_tail_sample(model, sample_budget, seed, dt);
    const MomentPair up = upper_second_from_draws(model, d, a_N);
    out.b_N = s2 - up.mean;
    out.std_error = up.se;
    out.karamata = static_cast<double>(N) / (a_N * a_N) * up.mean;
    return out;
}

}  // namespace lrdcma
