#include "frontlab/convolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

#include "frontlab/errors.hpp"
#include "frontlab/kernel.hpp"

namespace frontlab {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

constexpr double kNegligible = 1e-18;

std::size_t next_pow2(std::size_t n) {
    std::size_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

}  // namespace

struct ToeplitzConvolver::FftState {
    std::size_t m = 0;
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    std::vector<std::complex<double>> symbol;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;

    explicit FftState(const std::vector<double>& row) {
        const std::size_t n = row.size();
        m = next_pow2(2 * n);
        real = fftw_alloc_real(m);
        spec = fftw_alloc_complex(m / 2 + 1);
        {
            std::lock_guard<std::mutex> lock(planner_mutex());
            forward = fftw_plan_dft_r2c_1d(static_cast<int>(m), real, spec, FFTW_ESTIMATE);
            backward = fftw_plan_dft_c2r_1d(static_cast<int>(m), spec, real, FFTW_ESTIMATE);
        }
        std::fill(real, real + m, 0.0);
        real[0] = row[0];
        for (std::size_t k = 1; k < n; ++k) {
            real[k] = row[k];
            real[m - k] = row[k];
        }
        fftw_execute(forward);
        symbol.resize(m / 2 + 1);
        for (std::size_t k = 0; k < symbol.size(); ++k) {
            symbol[k] = std::complex<double>(spec[k][0], spec[k][1]) / static_cast<double>(m);
        }
    }

    ~FftState() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
        fftw_free(real);
        fftw_free(spec);
    }

    FftState(const FftState&) = delete;
    FftState& operator=(const FftState&) = delete;

    void apply(std::span<const double> v, std::span<double> out) {
        const std::size_t n = v.size();
        std::copy(v.begin(), v.end(), real);
        std::fill(real + n, real + m, 0.0);
        fftw_execute(forward);
        for (std::size_t k = 0; k < symbol.size(); ++k) {
            const std::complex<double> z = std::complex<double>(spec[k][0], spec[k][1]) * symbol[k];
            spec[k][0] = z.real();
            spec[k][1] = z.imag();
        }
        fftw_execute(backward);
        std::copy(real, real + n, out.begin());
    }
};

std::vector<double> normalized_kernel_row(const Kernel& k, double dx, std::size_t n) {
    std::vector<double> row(n);
    for (std::size_t j = 0; j < n; ++j) row[j] = k.density(static_cast<double>(j) * dx);
    // Mass of the sampled kernel over the window, by the lattice sum.
    double lattice = row[0];
    for (std::size_t j = 1; j < n; ++j) lattice += 2.0 * row[j];
    lattice *= dx;
    const double reach = static_cast<double>(n - 1) * dx;
    const double target = k.total_mass() - 2.0 * k.tail_mass(-reach - 0.5 * dx);
    if (lattice > 0.0 && target > 0.0) {
        const double scale = target / lattice;
        for (double& r : row) r *= scale;
    }
    return row;
}

ToeplitzConvolver::ToeplitzConvolver(std::vector<double> row, ConvolutionMethod method)
    : row_(std::move(row)), method_(method) {
    if (row_.empty()) throw InvalidArgument("ToeplitzConvolver: empty kernel row");
    // Entries below 1e-18 of the peak change no product in double precision.
    const double peak = *std::max_element(row_.begin(), row_.end());
    band_ = 0;
    for (std::size_t k = row_.size(); k-- > 0;) {
        if (row_[k] > kNegligible * peak) {
            band_ = k;
            break;
        }
    }
    std::fill(row_.begin() + static_cast<std::ptrdiff_t>(band_) + 1, row_.end(), 0.0);
    if (method_ == ConvolutionMethod::Auto) {
        const double n = static_cast<double>(row_.size());
        const double m = static_cast<double>(next_pow2(2 * row_.size()));
        const double direct_cost = n * (2.0 * static_cast<double>(band_) + 1.0);
        const double fft_cost = 6.0 * m * std::log2(m) + 64.0;
        method_ = direct_cost <= fft_cost ? ConvolutionMethod::Direct : ConvolutionMethod::Fft;
    }
    if (method_ == ConvolutionMethod::Fft) fft_ = std::make_unique<FftState>(row_);
}

ToeplitzConvolver::~ToeplitzConvolver() = default;
ToeplitzConvolver::ToeplitzConvolver(ToeplitzConvolver&&) noexcept = default;
ToeplitzConvolver& ToeplitzConvolver::operator=(ToeplitzConvolver&&) noexcept = default;

void ToeplitzConvolver::apply(std::span<const double> v, std::span<double> out) {
    if (v.size() != row_.size() || out.size() != row_.size()) {
        throw InvalidArgument("ToeplitzConvolver: size mismatch");
    }
    if (fft_) {
        fft_->apply(v, out);
    } else {
        apply_direct(v, out);
    }
}

void ToeplitzConvolver::apply_direct(std::span<const double> v, std::span<double> out) const {
    const std::size_t n = row_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j_lo = i > band_ ? i - band_ : 0;
        const std::size_t j_hi = std::min(n - 1, i + band_);
        double acc = 0.0;
        for (std::size_t j = j_lo; j < i; ++j) acc += row_[i - j] * v[j];
        for (std::size_t j = i; j <= j_hi; ++j) acc += row_[j - i] * v[j];
        out[i] = acc;
    }
}

}  // namespace frontlab
