#include "lrdcma/quadrature.hpp"

#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lrdcma/error.hpp"

namespace lrdcma {

Integral integrate(const std::function<double(double)>& f, double a, double b, double tol, const char* what) {
    Integral out;
    if (a == b) return out;
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    out.value = GK::integrate(f, a, b, 25, tol, &out.error, &out.l1);
    if (!std::isfinite(out.value) || out.error > 50.0 * tol * std::max(out.l1, 1e-300) + 1e-300) {
        throw NumericError(std::string(what) + ": quadrature did not converge on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "], error estimate " + std::to_string(out.error) +
                           " vs L1 norm " + std::to_string(out.l1));
    }
    return out;
}

double power_tail_integral(double S, double h, double a, double b, double tol) {
    if (!(S > 0.0) || !(a + b < -1.0)) throw ParameterError("power_tail_integral: need S > 0 and a + b < -1");
    const double e1 = -a - b - 1.0;  // exponent of u after s = S/u, plus one
    const double pref = std::pow(S, a + b + 1.0) / e1;
    if (h == 0.0) return pref;
    const double r = h / S;
    if (r <= 0.5) {
        // s = S/u gives int_0^1 u^(e1-1) (1 + r u)^b du; expand the binomial
        double sum = 0.0, coef = 1.0, rn = 1.0;
        for (int n = 0; n < 200; ++n) {
            const double term = coef * rn / (e1 + n);
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum)) break;
            coef *= (b - n) / (n + 1.0);
            rn *= r;
        }
        return pref * e1 * sum;
    }
    auto g = [&](double w) { return std::pow(1.0 + r * std::pow(w, 1.0 / e1), b); };
    return pref * integrate(g, 0.0, 1.0, tol, "power tail").value;
}

ChebyshevGrid chebyshev_grid(double lo, double hi, int n) {
    ChebyshevGrid g;
    g.nodes.resize(n);
    g.weights.resize(n);
    for (int j = 0; j < n; ++j) {
        const double x = std::cos(M_PI * j / (n - 1));
        g.nodes[j] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x;
        double w = (j % 2 == 0) ? 1.0 : -1.0;
        if (j == 0 || j == n - 1) w *= 0.5;
        g.weights[j] = w;
    }
    return g;
}

double barycentric(const ChebyshevGrid& grid, const std::vector<double>& f, double x) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < grid.nodes.size(); ++j) {
        const double diff = x - grid.nodes[j];
        if (diff == 0.0) return f[j];
        const double w = grid.weights[j] / diff;
        num += w * f[j];
        den += w;
    }
    return num / den;
}

}  // namespace lrdcma
