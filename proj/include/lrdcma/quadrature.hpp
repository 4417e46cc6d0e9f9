#pragma once

#include <functional>
#include <vector>

namespace lrdcma {

struct Integral {
    double value = 0.0;
    double error = 0.0;
    double l1 = 0.0;
};

// Adaptive Gauss-Kronrod (15 points) on [a, b]; throws NumericError when the
// estimated error stays above tol * L1 norm.
Integral integrate(const std::function<double(double)>& f, double a, double b, double tol,
                   const char* what = "integral");

/**
 * @brief Integral of s^a (s + h)^b over [S, inf) for S > 0, h >= 0 and a + b < -1.
 *
 * The substitution s = S/u followed by a power change of variable removes the
 * algebraic behaviour at infinity, leaving a smooth integrand on [0, 1].
 */
double power_tail_integral(double S, double h, double a, double b, double tol = 1e-12);

// Chebyshev points of the second kind mapped to [lo, hi], with barycentric weights.
struct ChebyshevGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
};
ChebyshevGrid chebyshev_grid(double lo, double hi, int n);

// Barycentric interpolation of node values `f` at point x.
double barycentric(const ChebyshevGrid& grid, const std::vector<double>& f, double x);

}  // namespace lrdcma
