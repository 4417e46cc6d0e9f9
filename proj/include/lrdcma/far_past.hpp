#pragma once

#include <functional>
#include <vector>

#include "lrdcma/quadrature.hpp"
#include "lrdcma/rng.hpp"

namespace lrdcma {

/**
 * @brief Contribution of the distant past to a moving average, on a smooth time range.
 *
 * Integer increment indices k < k_end are grouped into blocks whose width grows
 * geometrically with the distance from k_end. Each block contributes
 * weight(t - eps * k_center) * A_b, where A_b is the sum of its increments. The
 * resulting function of t is evaluated at Chebyshev nodes on [t_lo, t_hi] and
 * interpolated from there, which is accurate when the blocks are far from the range.
 */
class FarPastField {
public:
    struct Options {
        double rel_width = 0.05;    // block width / distance
        double tail_tol = 1e-10;    // stop when the weight's squared tail drops below this
        long max_blocks = 20000;
        int nodes = 32;
    };

    // `weight(x)` is the kernel at lag x > 0 (in observation time units); `eps` is the mesh step.
    // `tail_sq(D)` bounds sum over lags beyond D of eps * weight^2, in observation time units.
    FarPastField(std::function<double(double)> weight, std::function<double(double)> tail_sq, double eps,
                 long long k_end, double t_lo, double t_hi, Options opt);
    FarPastField(std::function<double(double)> weight, std::function<double(double)> tail_sq, double eps,
                 long long k_end, double t_lo, double t_hi)
        : FarPastField(std::move(weight), std::move(tail_sq), eps, k_end, t_lo, t_hi, Options{}) {}

    [[nodiscard]] std::size_t block_count() const noexcept { return counts_.size(); }
    [[nodiscard]] const std::vector<double>& block_counts() const noexcept { return counts_; }
    // Squared-weight mass not covered by any block.
    [[nodiscard]] double residual() const noexcept { return residual_; }

    // Node values for block sums `A` (one per block).
    [[nodiscard]] std::vector<double> node_values(const std::vector<double>& A) const;
    [[nodiscard]] double evaluate(const std::vector<double>& node_vals, double t) const;
    // Sum over blocks of count_b * weight(t - eps k_b)^2, exactly at t (no interpolation).
    [[nodiscard]] double diagonal_mass(double t) const;

private:
    std::function<double(double)> weight_;
    double eps_;
    std::vector<double> centers_;  // k_center * eps
    std::vector<double> counts_;
    ChebyshevGrid grid_;
    std::vector<double> W_;        // nodes x blocks, row-major
    double residual_ = 0.0;
    bool single_ = false;
};

}  // namespace lrdcma
