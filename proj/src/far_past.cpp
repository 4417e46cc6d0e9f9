#include "lrdcma/far_past.hpp"

#include <cmath>

#include "lrdcma/error.hpp"

namespace lrdcma {

FarPastField::FarPastField(std::function<double(double)> weight, std::function<double(double)> tail_sq, double eps,
                           long long k_end, double t_lo, double t_hi, Options opt)
    : weight_(std::move(weight)), eps_(eps) {
    if (!(eps > 0.0) || t_hi < t_lo) throw ParameterError("FarPastField: bad range");
    // distance (in steps) from the left end of the range to the block boundary
    const double base = t_lo / eps - static_cast<double>(k_end);
    if (!(base > 0.0)) throw ParameterError("FarPastField: blocks must lie before the range");
    double k_hi = static_cast<double>(k_end);  // exclusive upper index of the next block
    while (static_cast<long>(counts_.size()) < opt.max_blocks) {
        const double dist = t_lo / eps - k_hi;
        const double n = std::max(1.0, std::floor(opt.rel_width * dist));
        centers_.push_back(eps * (k_hi - 0.5 * (n + 1.0)));
        counts_.push_back(n);
        k_hi -= n;
        if (tail_sq(eps * (t_lo / eps - k_hi)) < opt.tail_tol) break;
    }
    residual_ = tail_sq(eps * (t_lo / eps - k_hi));
    single_ = t_hi - t_lo < 1e-12;
    grid_ = single_ ? ChebyshevGrid{{t_lo}, {1.0}} : chebyshev_grid(t_lo, t_hi, opt.nodes);
    const std::size_t B = counts_.size();
    W_.resize(grid_.nodes.size() * B);
    for (std::size_t j = 0; j < grid_.nodes.size(); ++j)
        for (std::size_t b = 0; b < B; ++b) W_[j * B + b] = weight_(grid_.nodes[j] - centers_[b]);
}

std::vector<double> FarPastField::node_values(const std::vector<double>& A) const {
    const std::size_t B = counts_.size();
    if (A.size() != B) throw ParameterError("FarPastField: wrong number of block sums");
    std::vector<double> out(grid_.nodes.size(), 0.0);
    for (std::size_t j = 0; j < out.size(); ++j) {
        double s = 0.0;
        for (std::size_t b = 0; b < B; ++b) s += W_[j * B + b] * A[b];
        out[j] = s;
    }
    return out;
}

double FarPastField::evaluate(const std::vector<double>& node_vals, double t) const {
    if (single_) return node_vals[0];
    return barycentric(grid_, node_vals, t);
}

double FarPastField::diagonal_mass(double t) const {
    double s = 0.0;
    for (std::size_t b = 0; b < counts_.size(); ++b) {
        const double w = weight_(t - centers_[b]);
        s += counts_[b] * w * w;
    }
    return s;
}

}  // namespace lrdcma
