#include "lrdcma/simulate.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "lrdcma/error.hpp"

namespace lrdcma {

namespace {

constexpr std::size_t kDirectWorkLimit = 2'000'000;

template <typename T>
T to_little(T v) {
    if constexpr (std::endian::native == std::endian::little) return v;
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
    return v;
}

template <typename T>
void put(std::ostream& os, T v) {
    v = to_little(v);
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw ParameterError("increment dump is truncated");
    return to_little(v);
}

// sigma2-free asymptotic bound on int_D^inf f^2, used only to stop the far-past blocks.
double asymptotic_l2_tail(const Kernel& k, double D) {
    if (k.test_only()) return D >= 1.0 ? 0.0 : 1.0;
    const double e = 2.0 * k.d() - 1.0;
    const double C = std::max(k.C_d(), k.bound_K());
    return C * C * std::pow(std::max(D, 1.0), e) / -e;
}

}  // namespace

std::string to_string(ConvolutionMethod m) {
    switch (m) {
        case ConvolutionMethod::automatic: return "auto";
        case ConvolutionMethod::direct: return "direct";
        case ConvolutionMethod::fft: return "fft";
    }
    return "auto";
}

ConvolutionMethod convolution_method_from_string(const std::string& s) {
    if (s == "auto") return ConvolutionMethod::automatic;
    if (s == "direct") return ConvolutionMethod::direct;
    if (s == "fft") return ConvolutionMethod::fft;
    throw ParameterError("unknown convolution method '" + s + "'");
}

void SimulationGrid::validate() const {
    if (m < 1) throw ParameterError("grid.m must be a positive integer");
    if (N < 1) throw ParameterError("grid.N must be a positive integer");
    if (H < 0) throw ParameterError("grid.H must be nonnegative");
    if (K_trunc < 0) throw ParameterError("grid.K_trunc must be nonnegative");
    if (K() < static_cast<long long>(m) * (N + H))
        throw ParameterError("grid.K_trunc too small: need eps * K_trunc >= N + H");
    if (!(truncation_budget > 0.0)) throw ParameterError("grid.truncation_budget must be positive");
}

Simulator::Simulator(Kernel kernel, LevyModel model, SimulationGrid grid)
    : kernel_(std::move(kernel)), model_(model), grid_(grid) {
    grid_.validate();
    model_.validate();
    const double eps = grid_.epsilon();
    const double sigma2 = variance(model_);
    const bool use_far = grid_.far_past && !kernel_.test_only();
    const std::size_t L = static_cast<std::size_t>(grid_.stream_length());
    const std::size_t taps = grid_.far_past ? L : static_cast<std::size_t>(grid_.K() + 1);

    if (use_far) {
        const Kernel& k = kernel_;
        FarPastField::Options opt;
        opt.tail_tol = 1e-10 * std::max(1.0, k.bound_K() * k.bound_K());
        far_ = std::make_unique<FarPastField>([&k](double x) { return k(x); },
                                              [&k](double D) { return asymptotic_l2_tail(k, D); }, eps,
                                              grid_.k_min(), 1.0, static_cast<double>(grid_.N + grid_.H), opt);
    }
    const double err = use_far ? sigma2 * far_->residual()
                               : (grid_.far_past ? 0.0 : l2_tail(kernel_, sigma2, eps * static_cast<double>(grid_.K())));
    if (err > grid_.truncation_budget) {
        throw ConfigError({"truncation L2 error " + std::to_string(err) + " exceeds grid.truncation_budget " +
                           std::to_string(grid_.truncation_budget)});
    }

    c_.resize(taps);
    for (std::size_t i = 0; i < taps; ++i) c_[i] = kernel_(eps * static_cast<double>(i));

    method_ = grid_.method;
    if (method_ == ConvolutionMethod::automatic) {
        const double work = static_cast<double>(grid_.N + grid_.H) * static_cast<double>(taps);
        method_ = work > static_cast<double>(kDirectWorkLimit) ? ConvolutionMethod::fft : ConvolutionMethod::direct;
    }
    if (method_ == ConvolutionMethod::fft) fft_ = std::make_unique<FftConvolver>(c_, L);
}

void Simulator::convolve(std::span<const double> z, std::span<double> out, ConvolutionMethod method,
                         std::size_t taps) const {
    const long T = grid_.N + grid_.H;
    if (method == ConvolutionMethod::direct) {
        for (long t = 1; t <= T; ++t) {
            const long long P = grid_.position(t);
            const long long top = std::min<long long>(P, static_cast<long long>(taps) - 1);
            double s = 0.0;
            for (long long i = 0; i <= top; ++i) s += c_[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(P - i)];
            out[static_cast<std::size_t>(t - 1)] = s;
        }
        return;
    }
    std::vector<double> y(static_cast<std::size_t>(grid_.position(T) + 1));
    if (taps == c_.size() && fft_) {
        fft_->apply(z, y);
    } else {
        FftConvolver conv(std::span<const double>(c_.data(), taps), z.size());
        conv.apply(z, y);
    }
    for (long t = 1; t <= T; ++t) out[static_cast<std::size_t>(t - 1)] = y[static_cast<std::size_t>(grid_.position(t))];
}

std::vector<double> Simulator::values_from_stream(std::span<const double> z, ConvolutionMethod method) const {
    if (static_cast<long long>(z.size()) != grid_.stream_length())
        throw ParameterError("stream length does not match the grid");
    if (method == ConvolutionMethod::automatic) method = method_;
    std::vector<double> out(static_cast<std::size_t>(grid_.N + grid_.H));
    convolve(z, out, method, c_.size());
    return out;
}

SamplePath Simulator::simulate(std::uint64_t seed, std::uint64_t replicate) const {
    Rng rng = make_rng(seed, replicate);
    std::vector<double> z(static_cast<std::size_t>(grid_.stream_length()));
    const double eps = grid_.epsilon();
    fill_increments(model_, eps, z, rng);

    SamplePath path;
    path.grid = grid_;
    path.values.resize(static_cast<std::size_t>(grid_.N + grid_.H));
    convolve(z, path.values, method_, c_.size());
    if (far_) {
        std::vector<double> A(far_->block_count());
        const auto& counts = far_->block_counts();
        for (std::size_t b = 0; b < A.size(); ++b) A[b] = sample_aggregate(model_, eps * counts[b], rng);
        const auto nodes = far_->node_values(A);
        path.far.resize(path.values.size());
        for (std::size_t t = 0; t < path.values.size(); ++t) {
            path.far[t] = far_->evaluate(nodes, static_cast<double>(t + 1));
            path.values[t] += path.far[t];
        }
    }
    if (grid_.retain_increments) path.increments = std::move(z);
    return path;
}

SamplePath simulate_path(const Kernel& kernel, const LevyModel& model, const SimulationGrid& grid, std::uint64_t seed) {
    return Simulator(kernel, model, grid).simulate(seed);
}

Decomposition decompose(const SamplePath& path, const Kernel& kernel, long h, double b) {
    if (!path.has_increments()) throw StateError("decompose: the path has no retained increments");
    if (path.grid.far_past) throw StateError("decompose: needs a path simulated with grid.far_past = false");
    const SimulationGrid& g = path.grid;
    if (h < 0 || h > g.H) throw ParameterError("decompose: lag outside 0..H");
    const double eps = g.epsilon();
    const long long K = g.K();
    const long long mh = static_cast<long long>(g.m) * h;

    Decomposition out;
    for (long t = 0; t < g.N; ++t) out.gamma_hat += path.values[t] * path.values[t + h];
    out.gamma_hat /= static_cast<double>(g.N);
    if (mh > K) {
        out.off_diagonal = out.gamma_hat;
        return out;
    }
    std::vector<double> w(static_cast<std::size_t>(K - mh + 1));
    double wsum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = kernel(eps * static_cast<double>(i)) * kernel(eps * static_cast<double>(i + mh));
        wsum += w[i];
    }
    const auto& z = path.increments;
    double diag_raw = 0.0;
    if (static_cast<double>(g.N) * static_cast<double>(w.size()) <= static_cast<double>(kDirectWorkLimit)) {
        for (long t = 1; t <= g.N; ++t) {
            const long long P = g.position(t);
            double s = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) {
                const double v = z[static_cast<std::size_t>(P - static_cast<long long>(i))];
                s += w[i] * v * v;
            }
            diag_raw += s;
        }
    } else {
        std::vector<double> z2(z.size());
        for (std::size_t k = 0; k < z.size(); ++k) z2[k] = z[k] * z[k];
        const auto y = linear_convolution(w, z2);
        for (long t = 1; t <= g.N; ++t) diag_raw += y[static_cast<std::size_t>(g.position(t))];
    }
    diag_raw /= static_cast<double>(g.N);
    out.centering = eps * b * wsum;
    out.diagonal = diag_raw - out.centering;
    out.off_diagonal = out.gamma_hat - diag_raw;
    return out;
}

TruncationReport truncation_report(const Kernel& kernel, double sigma2, double T, long H) {
    if (!(T > 0.0) || H < 0) throw ParameterError("truncation_report: need T > 0 and H >= 0");
    TruncationReport r;
    r.T = T;
    r.l2_tail = l2_tail(kernel, sigma2, T);
    for (long h = 0; h <= H; ++h) {
        const double lo = std::max(T - static_cast<double>(h), 1e-12);
        r.bias_bound.push_back(std::sqrt(l2_tail(kernel, sigma2, lo) * r.l2_tail));
    }
    return r;
}

TruncationReport truncation_report(const Kernel& kernel, double sigma2, const SimulationGrid& grid) {
    auto r = truncation_report(kernel, sigma2, grid.epsilon() * static_cast<double>(grid.K()), grid.H);
    if (grid.far_past && !kernel.test_only()) {
        const Simulator sim(kernel, brownian(std::sqrt(sigma2)), grid);
        r.far_residual = sigma2 * sim.far_field()->residual();
    }
    return r;
}

void write_increment_dump(std::ostream& os, int m, std::span<const double> values) {
    os.write("LRDC", 4);
    put<std::uint32_t>(os, 1);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(m));
    put<std::uint64_t>(os, values.size());
    for (double v : values) put<double>(os, v);
}

void write_increment_dump(const std::string& path, int m, std::span<const double> values) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ParameterError("cannot open '" + path + "' for writing");
    write_increment_dump(os, m, values);
    if (!os) throw ParameterError("write to '" + path + "' failed");
}

std::vector<double> read_increment_dump(const std::string& path, int* m) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ParameterError("cannot open '" + path + "'");
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "LRDC", 4) != 0) throw ParameterError("not an increment dump: bad magic");
    if (get<std::uint32_t>(is) != 1) throw ParameterError("unsupported increment dump version");
    const auto mm = get<std::uint32_t>(is);
    if (m) *m = static_cast<int>(mm);
    const auto n = get<std::uint64_t>(is);
    std::vector<double> out(n);
    for (auto& v : out) v = get<double>(is);
    return out;
}

}  // namespace lrdcma
