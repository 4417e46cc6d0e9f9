#include "lrdcma/fft.hpp"

#include <algorithm>
#include <complex>
#include <mutex>

#include <fftw3.h>

#include "lrdcma/error.hpp"

namespace lrdcma {

namespace {

// FFTW planning is not thread-safe; execution with new-array functions is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwBuffer {
    explicit FftwBuffer(std::size_t bytes) : p(fftw_malloc(bytes)) {
        if (!p) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(p); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    void* p;
};

}  // namespace

std::size_t good_fft_size(std::size_t n) {
    std::size_t best = 1;
    while (best < n) best <<= 1;
    for (std::size_t p5 = 1; p5 < best; p5 *= 5) {
        for (std::size_t p35 = p5; p35 < best; p35 *= 3) {
            std::size_t v = p35;
            while (v < n) v <<= 1;
            best = std::min(best, v);
        }
    }
    return best;
}

struct FftConvolver::Impl {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    std::vector<std::complex<double>> spectrum;
};

FftConvolver::FftConvolver(std::span<const double> filter, std::size_t signal_length)
    : impl_(std::make_unique<Impl>()), signal_len_(signal_length), filter_len_(filter.size()) {
    if (filter.empty() || signal_length == 0) throw ParameterError("FftConvolver: empty input");
    n_ = good_fft_size(filter.size() + signal_length - 1);
    const std::size_t nc = n_ / 2 + 1;
    FftwBuffer real(sizeof(double) * n_);
    FftwBuffer cplx(sizeof(fftw_complex) * nc);
    auto* r = static_cast<double*>(real.p);
    auto* c = static_cast<fftw_complex*>(cplx.p);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        const int n = static_cast<int>(n_);
        impl_->forward = fftw_plan_dft_r2c_1d(n, r, c, FFTW_ESTIMATE);
        impl_->backward = fftw_plan_dft_c2r_1d(n, c, r, FFTW_ESTIMATE);
    }
    std::fill(r, r + n_, 0.0);
    std::copy(filter.begin(), filter.end(), r);
    fftw_execute_dft_r2c(impl_->forward, r, c);
    impl_->spectrum.resize(nc);
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < nc; ++i) impl_->spectrum[i] = std::complex<double>(c[i][0], c[i][1]) * scale;
}

FftConvolver::~FftConvolver() {
    if (!impl_) return;
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (impl_->forward) fftw_destroy_plan(impl_->forward);
    if (impl_->backward) fftw_destroy_plan(impl_->backward);
}

void FftConvolver::apply(std::span<const double> signal, std::span<double> out) const {
    if (signal.size() > signal_len_) throw ParameterError("FftConvolver: signal longer than planned");
    if (out.size() > filter_len_ + signal_len_ - 1) throw ParameterError("FftConvolver: output too long");
    const std::size_t nc = n_ / 2 + 1;
    FftwBuffer real(sizeof(double) * n_);
    FftwBuffer cplx(sizeof(fftw_complex) * nc);
    auto* r = static_cast<double*>(real.p);
    auto* c = static_cast<fftw_complex*>(cplx.p);
    std::fill(r, r + n_, 0.0);
    std::copy(signal.begin(), signal.end(), r);
    fftw_execute_dft_r2c(impl_->forward, r, c);
    for (std::size_t i = 0; i < nc; ++i) {
        const std::complex<double> v = std::complex<double>(c[i][0], c[i][1]) * impl_->spectrum[i];
        c[i][0] = v.real();
        c[i][1] = v.imag();
    }
    fftw_execute_dft_c2r(impl_->backward, c, r);
    std::copy(r, r + out.size(), out.begin());
}

std::vector<double> linear_convolution(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return {};
    FftConvolver conv(a, b.size());
    std::vector<double> out(a.size() + b.size() - 1);
    conv.apply(b, out);
    return out;
}

}  // namespace lrdcma
