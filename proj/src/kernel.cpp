#include "lrdcma/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "lrdcma/error.hpp"
#include "lrdcma/fft.hpp"
#include "lrdcma/quadrature.hpp"

namespace lrdcma {

namespace {

using cplx = std::complex<double>;

// Point beyond which the direct part of every series / integral stops and the
// two-term tail expansion takes over. The neglected term is O(t^-2) relative.
constexpr double kSeriesSwitch = 1.0e4;

cplx poly_eval(const std::vector<double>& coef_low_to_high, cplx z) {
    cplx acc = 0.0;
    for (auto it = coef_low_to_high.rbegin(); it != coef_low_to_high.rend(); ++it) acc = acc * z + *it;
    return acc;
}

// Monic a(z) = z^p + a[0] z^(p-1) + ... + a[p-1], returned low-to-high.
std::vector<double> monic_low_to_high(const std::vector<double>& a) {
    std::vector<double> c(a.rbegin(), a.rend());
    c.push_back(1.0);
    return c;
}

std::vector<double> derivative(const std::vector<double>& c) {
    std::vector<double> out;
    for (std::size_t k = 1; k < c.size(); ++k) out.push_back(static_cast<double>(k) * c[k]);
    return out;
}

}  // namespace

std::string to_string(KernelVariant v) {
    switch (v) {
        case KernelVariant::power_law: return "power_law";
        case KernelVariant::fln_increment: return "fln_increment";
        case KernelVariant::ficarma: return "ficarma";
        case KernelVariant::indicator: return "indicator";
    }
    return "unknown";
}

KernelVariant kernel_variant_from_string(const std::string& name) {
    if (name == "power_law") return KernelVariant::power_law;
    if (name == "fln_increment") return KernelVariant::fln_increment;
    if (name == "ficarma") return KernelVariant::ficarma;
    if (name == "indicator") return KernelVariant::indicator;
    throw ParameterError("unknown kernel variant '" + name + "'");
}

CarmaKernel::CarmaKernel(std::vector<double> a, std::vector<double> b) : a_(std::move(a)), b_(std::move(b)) {
    const std::size_t p = a_.size();
    if (p == 0) throw ParameterError("CARMA: a(z) must have degree >= 1");
    if (b_.empty() || b_.size() > p) throw ParameterError("CARMA: need 0 <= deg b < deg a");
    if (b_[0] == 0.0) throw ParameterError("CARMA: b(0) must be nonzero");
    for (double v : a_)
        if (!std::isfinite(v)) throw ParameterError("CARMA: non-finite coefficient");

    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    for (std::size_t j = 0; j < p; ++j) comp(0, static_cast<Eigen::Index>(j)) = -a_[j];
    for (std::size_t i = 1; i < p; ++i) comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    if (es.info() != Eigen::Success) throw NumericError("CARMA: eigenvalue computation failed");

    const auto ac = monic_low_to_high(a_);
    const auto da = derivative(ac);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        cplx z = es.eigenvalues()[i];
        for (int it = 0; it < 3; ++it) {
            const cplx fz = poly_eval(ac, z);
            const cplx dz = poly_eval(da, z);
            if (std::abs(dz) == 0.0) break;
            z -= fz / dz;
        }
        roots_.push_back(z);
    }
    double rmax = 1.0;
    for (const cplx& z : roots_) rmax = std::max(rmax, std::abs(z));
    for (std::size_t i = 0; i < p; ++i) {
        if (!(roots_[i].real() < 0.0)) throw ParameterError("CARMA: a(z) has a root with nonnegative real part");
        bool repeated = false;
        for (std::size_t j = i + 1; j < p; ++j) {
            const double scale = std::max({1.0, std::abs(roots_[i]), std::abs(roots_[j])});
            repeated = repeated || std::abs(roots_[i] - roots_[j]) < 1e-8 * scale;
        }
        // a k-fold root is only resolved to about eps^(1/k), so also test a'(root)
        repeated = repeated || std::abs(poly_eval(da, roots_[i])) < 1e-6 * std::pow(rmax, static_cast<double>(p - 1));
        if (repeated) throw ParameterError("CARMA: repeated roots of a(z) are not supported");
    }
    for (const cplx& z : roots_) residues_.push_back(poly_eval(b_, z) / poly_eval(da, z));
}

double CarmaKernel::operator()(double t) const {
    if (t < 0.0) return 0.0;
    cplx acc = 0.0;
    for (std::size_t j = 0; j < roots_.size(); ++j) acc += residues_[j] * std::exp(roots_[j] * t);
    return acc.real();
}

double CarmaKernel::imaginary_residue(double t) const {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < roots_.size(); ++j) acc += residues_[j] * std::exp(roots_[j] * t);
    return acc.imag();
}

double CarmaKernel::transfer_at_zero() const noexcept { return b_[0] / a_.back(); }

double CarmaKernel::first_moment() const noexcept {
    const double ap = a_.back();
    const double da0 = a_.size() >= 2 ? a_[a_.size() - 2] : 1.0;
    const double b1 = b_.size() > 1 ? b_[1] : 0.0;
    return -(b1 * ap - b_[0] * da0) / (ap * ap);
}

double CarmaKernel::slowest_rate() const noexcept {
    double r = std::numeric_limits<double>::infinity();
    for (const cplx& z : roots_) r = std::min(r, -z.real());
    return r;
}

double carma_kernel(const std::vector<double>& a, const std::vector<double>& b, double t) {
    return CarmaKernel(a, b)(t);
}

Kernel::Kernel(KernelSpec spec) : spec_(std::move(spec)) {
    if (!(spec_.quad_tol > 0.0)) throw ParameterError("kernel quad_tol must be positive");
    if (spec_.I_max < 1) throw ParameterError("kernel I_max must be positive");
    if (spec_.variant == KernelVariant::indicator) {
        C_ = 0.0;
        K_ = 1.0;
        return;
    }
    const double d = spec_.d;
    if (!(d > 0.0 && d < 0.5)) throw ParameterError("d must lie in (0, 0.5)");
    switch (spec_.variant) {
        case KernelVariant::power_law:
            if (!(spec_.C_d > 0.0) || !std::isfinite(spec_.C_d)) throw ParameterError("C_d must be positive");
            C_ = spec_.C_d;
            K_ = C_;
            break;
        case KernelVariant::fln_increment:
            C_ = d / std::tgamma(d + 1.0);
            c1_ = d * (1.0 - d) / (2.0 * std::tgamma(d + 1.0));
            asym_start_ = 64.0;
            K_ = 1.0 / std::tgamma(d + 1.0);
            break;
        case KernelVariant::ficarma: {
            carma_ = std::make_shared<const CarmaKernel>(spec_.a, spec_.b);
            C_ = carma_->transfer_at_zero() / std::tgamma(d);
            if (!(C_ > 0.0)) throw ParameterError("FICARMA: b(0)/a(0) must be positive");
            c1_ = (1.0 - d) / std::tgamma(d) * carma_->first_moment();
            asym_start_ = std::max(64.0, 40.0 / carma_->slowest_rate());
            double k = C_;
            const double hi = 4.0 * asym_start_;
            for (int i = 0; i <= 200; ++i) {
                const double t = 1e-3 * std::pow(hi / 1e-3, i / 200.0);
                k = std::max(k, std::abs((*this)(t)) / std::max(1.0, std::pow(t, d - 1.0)));
            }
            K_ = 1.05 * k;
            break;
        }
        case KernelVariant::indicator: break;
    }
}

double Kernel::operator()(double t) const {
    if (!(t > 0.0)) return 0.0;
    const double d = spec_.d;
    switch (spec_.variant) {
        case KernelVariant::power_law: return t <= 1.0 ? C_ : C_ * std::pow(t, d - 1.0);
        case KernelVariant::fln_increment: {
            const double g = std::tgamma(d + 1.0);
            if (t <= 1.0) return std::pow(t, d) / g;
            // t^d - (t-1)^d without cancellation
            return -std::pow(t, d) * std::expm1(d * std::log1p(-1.0 / t)) / g;
        }
        case KernelVariant::ficarma: return ficarma_eval(*this, t, spec_.quad_tol);
        case KernelVariant::indicator: return t <= 1.0 ? 1.0 : 0.0;
    }
    return 0.0;
}

double Kernel::tail_value(double t) const noexcept {
    const double d = spec_.d;
    return C_ * std::pow(t, d - 1.0) + c1_ * std::pow(t, d - 2.0);
}

double Kernel::tail_derivative(double t) const noexcept {
    const double d = spec_.d;
    return C_ * (d - 1.0) * std::pow(t, d - 2.0) + c1_ * (d - 2.0) * std::pow(t, d - 3.0);
}

Kernel power_law_kernel(double d, double C_d) {
    KernelSpec s;
    s.variant = KernelVariant::power_law;
    s.d = d;
    s.C_d = C_d;
    return Kernel(s);
}

Kernel fln_increment_kernel(double d) {
    KernelSpec s;
    s.variant = KernelVariant::fln_increment;
    s.d = d;
    return Kernel(s);
}

Kernel ficarma_kernel(std::vector<double> a, std::vector<double> b, double d) {
    KernelSpec s;
    s.variant = KernelVariant::ficarma;
    s.d = d;
    s.a = std::move(a);
    s.b = std::move(b);
    return Kernel(s);
}

Kernel indicator_kernel() {
    KernelSpec s;
    s.variant = KernelVariant::indicator;
    return Kernel(s);
}

double ficarma_eval(const Kernel& kernel, double t, double quad_tol) {
    const CarmaKernel* g = kernel.carma();
    if (!g) throw ParameterError("ficarma_eval: kernel is not FICARMA");
    if (!(t > 0.0)) return 0.0;
    const double d = kernel.d();
    const double delta = std::min(t, 1.0);
    // u = w^(1/d) maps u^(d-1) du to dw / d
    double total = integrate([&](double w) { return (*g)(t - std::pow(w, 1.0 / d)); }, 0.0, std::pow(delta, d),
                             quad_tol, "ficarma near zero")
                       .value /
                   d;
    if (t > delta) {
        auto body = [&](double u) { return (*g)(t - u) * std::pow(u, d - 1.0); };
        const double split = std::max(delta, t - 40.0 / g->slowest_rate());
        if (split > delta) total += integrate(body, delta, split, quad_tol, "ficarma body").value;
        total += integrate(body, split, t, quad_tol, "ficarma body").value;
    }
    return total / std::tgamma(d);
}

namespace {

// int_S^inf T(s) T(s+h) ds with T the two-term tail expansion.
double expansion_product_tail(const Kernel& k, double S, double h, double tol) {
    const double C = k.C_d();
    const double c1 = k.tail_c1();
    const double e = k.d() - 1.0;
    double v = 0.0;
    if (C != 0.0) v += C * C * power_tail_integral(S, h, e, e, tol);
    if (c1 != 0.0) {
        v += C * c1 * (power_tail_integral(S, h, e, e - 1.0, tol) + power_tail_integral(S, h, e - 1.0, e, tol));
        v += c1 * c1 * power_tail_integral(S, h, e - 1.0, e - 1.0, tol);
    }
    return v;
}

// Direct part of int_a^b f(s) f(s+h) ds on geometric panels with the kinks as breakpoints.
double product_integral(const Kernel& k, double a, double b, double h, double tol) {
    std::vector<double> br{a};
    for (double x : {1.0 - h, 1.0})
        if (x > a && x < b) br.push_back(x);
    double x = std::max(2.0, a * 2.0);
    while (x < b) {
        br.push_back(x);
        x *= 2.0;
    }
    br.push_back(b);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    auto F = [&](double s) { return k(s) * k(s + h); };
    double v = 0.0;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        const double lo = br[i];
        const double w = br[i + 1] - lo;
        if (lo == 0.0 || lo == 1.0 || lo == 1.0 - h) {
            // s = lo + w u^4 smooths the (s - lo)^d behaviour at the left end
            v += integrate([&](double u) { return F(lo + w * u * u * u * u) * 4.0 * w * u * u * u; }, 0.0, 1.0, tol,
                           "autocovariance")
                     .value;
        } else {
            v += integrate(F, lo, br[i + 1], tol, "autocovariance").value;
        }
    }
    return v;
}

double direct_switch(const Kernel& k) {
    if (k.variant() == KernelVariant::power_law || k.variant() == KernelVariant::indicator) return 1.0;
    return std::max(k.asymptotic_start(), kSeriesSwitch);
}

// K^2 * sum_{i > I} i^(2d-2), bounded by the integral from I.
double series_tail_bound(const Kernel& k, double I) {
    if (k.test_only()) return 0.0;
    const double e = 2.0 * k.d() - 1.0;
    return k.bound_K() * k.bound_K() * std::pow(I, e) / -e;
}

// sum_{j > J} F(j) for F(x) = T(x/m + s0) T(x/m + s0 + h), by Euler-Maclaurin.
double em_tail(const Kernel& k, double J, double m, double s0, double h, double tol) {
    if (k.C_d() == 0.0) return 0.0;
    const double s = J / m + s0;
    const double integral = m * expansion_product_tail(k, s, h, tol);
    const double F = k.tail_value(s) * k.tail_value(s + h);
    const double dF = (k.tail_derivative(s) * k.tail_value(s + h) + k.tail_value(s) * k.tail_derivative(s + h)) / m;
    return integral - 0.5 * F - dF / 12.0;
}

// Number of directly summed step-kernel terms; the tail expansion is cheap when J/m >> h.
long direct_length(const Kernel& k, int m, long h) {
    const double units = std::max({4.0 * direct_switch(k), 2.0 * static_cast<double>(h), 256.0});
    return static_cast<long>(std::ceil(units)) * m;
}

}  // namespace

double autocovariance(const Kernel& kernel, double sigma2, double h, double quad_tol) {
    if (h < 0.0) throw ParameterError("autocovariance: lag must be nonnegative");
    if (kernel.test_only()) {
        return sigma2 * std::max(0.0, 1.0 - h);
    }
    const double S = direct_switch(kernel);
    const double direct = product_integral(kernel, 0.0, S, h, quad_tol);
    return sigma2 * (direct + expansion_product_tail(kernel, S, h, quad_tol * 1e-2));
}

double l2_tail(const Kernel& kernel, double sigma2, double T, double quad_tol) {
    if (kernel.test_only()) return sigma2 * std::max(0.0, 1.0 - std::max(T, 0.0));
    const double S = std::max(direct_switch(kernel), T);
    double v = expansion_product_tail(kernel, S, 0.0, quad_tol);
    if (T < S) v += product_integral(kernel, std::max(T, 0.0), S, 0.0, quad_tol);
    return sigma2 * v;
}

double step_autocovariance(const Kernel& kernel, double sigma2, int m, long h) {
    if (m < 1) throw ParameterError("mesh m must be positive");
    if (h < 0) throw ParameterError("lag must be nonnegative");
    const double md = m;
    const long J = direct_length(kernel, m, h);
    double sum = 0.0;
    for (long j = 1; j <= J; ++j) sum += kernel(j / md) * kernel(j / md + static_cast<double>(h));
    sum += em_tail(kernel, static_cast<double>(J), md, 0.0, static_cast<double>(h), 1e-10);
    return sigma2 * sum / md;
}

std::vector<double> step_autocovariance_sequence(const Kernel& kernel, double sigma2, int m, long H) {
    if (m < 1) throw ParameterError("mesh m must be positive");
    if (H < 0) throw ParameterError("lag must be nonnegative");
    const double md = m;
    const long J = direct_length(kernel, m, H);
    std::vector<double> c(static_cast<std::size_t>(J + 1 + m * H));
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = kernel(static_cast<double>(j) / md);
    std::vector<double> rev(c.rbegin() + static_cast<long>(m * H), c.rend());
    std::vector<double> out(static_cast<std::size_t>(H + 1));
    std::vector<double> y(static_cast<std::size_t>(J + 1 + m * H));
    FftConvolver conv(rev, c.size());
    conv.apply(c, y);
    for (long h = 0; h <= H; ++h) {
        const double direct = y[static_cast<std::size_t>(J + m * h)];
        out[static_cast<std::size_t>(h)] =
            sigma2 * (direct + em_tail(kernel, static_cast<double>(J), md, 0.0, static_cast<double>(h), 1e-10)) / md;
    }
    return out;
}

SeriesValue G(const Kernel& kernel, long h, double s) {
    if (h < 0) throw ParameterError("G: lag must be nonnegative");
    if (s < 0.0 || s > 1.0) throw ParameterError("G: s must lie in [0, 1]");
    const long I = std::max<long>(kernel.spec().I_max, static_cast<long>(std::ceil(kernel.asymptotic_start())));
    double sum = 0.0;
    for (long i = 0; i <= I; ++i) sum += kernel(i + s) * kernel(i + h + s);
    SeriesValue out;
    out.value = sum + em_tail(kernel, static_cast<double>(I), 1.0, s, static_cast<double>(h), 1e-10);
    out.tail_bound = series_tail_bound(kernel, static_cast<double>(I));
    return out;
}

SeriesValue G_step(const Kernel& kernel, int m, long h, double s) {
    if (m < 1) throw ParameterError("G_step: mesh m must be positive");
    if (s < 0.0 || s > 1.0) throw ParameterError("G_step: s must lie in [0, 1]");
    // f_m(i + s) = f(i + floor(m s)/m); s = 1 falls in cell 0 of the next unit interval
    const double cell = std::min(std::floor(m * s), static_cast<double>(m)) / m;
    if (cell >= 1.0) return G(kernel, h, 0.0);
    return G(kernel, h, cell);
}

std::vector<double> G_step_cells(const Kernel& kernel, int m, long h) {
    if (m < 1) throw ParameterError("G_step: mesh m must be positive");
    std::vector<double> out(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) out[static_cast<std::size_t>(j)] = G(kernel, h, static_cast<double>(j) / m).value;
    return out;
}

}  // namespace lrdcma
