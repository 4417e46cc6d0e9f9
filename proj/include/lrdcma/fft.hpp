#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace lrdcma {

// Smallest n' >= n of the form 2^a 3^b 5^c.
[[nodiscard]] std::size_t good_fft_size(std::size_t n);

/**
 * @brief Linear convolution y = k * x against a fixed filter k, via real FFTs.
 *
 * The filter spectrum is computed once; apply() is const and safe to call from
 * several threads at the same time (each call uses its own buffers).
 */
class FftConvolver {
public:
    FftConvolver(std::span<const double> filter, std::size_t signal_length);
    ~FftConvolver();
    FftConvolver(const FftConvolver&) = delete;
    FftConvolver& operator=(const FftConvolver&) = delete;

    // Writes y[0 .. out.size()) where y[q] = sum_i k[i] x[q - i]; out.size() <= filter + signal - 1.
    void apply(std::span<const double> signal, std::span<double> out) const;
    [[nodiscard]] std::size_t transform_size() const noexcept { return n_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::size_t n_ = 0;
    std::size_t signal_len_ = 0;
    std::size_t filter_len_ = 0;
};

[[nodiscard]] std::vector<double> linear_convolution(std::span<const double> a, std::span<const double> b);

}  // namespace lrdcma
