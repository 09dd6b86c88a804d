#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace frontlab {

class Kernel;

enum class ConvolutionMethod { Auto, Direct, Fft };

/// Symmetric Toeplitz product out_i = sum_j row[|i - j|] * v_j on n points.
///
/// On a uniform grid an even kernel makes J(x_i - x_j) a function of |i - j|,
/// so one row describes the whole matrix. The FFT path embeds the matrix in a
/// circulant of power-of-two size; the direct path sums over the kernel's
/// band, after dropping entries below 1e-18 of the peak. Instances own scratch
/// buffers and are not thread-safe; use one per thread.
class ToeplitzConvolver {
public:
    ToeplitzConvolver(std::vector<double> row, ConvolutionMethod method = ConvolutionMethod::Auto);
    ~ToeplitzConvolver();
    ToeplitzConvolver(ToeplitzConvolver&&) noexcept;
    ToeplitzConvolver& operator=(ToeplitzConvolver&&) noexcept;
    ToeplitzConvolver(const ToeplitzConvolver&) = delete;
    ToeplitzConvolver& operator=(const ToeplitzConvolver&) = delete;

    std::size_t size() const { return row_.size(); }
    ConvolutionMethod method() const { return method_; }
    const std::vector<double>& row() const { return row_; }

    void apply(std::span<const double> v, std::span<double> out);

private:
    struct FftState;

    void apply_direct(std::span<const double> v, std::span<double> out) const;

    std::vector<double> row_;
    std::size_t band_ = 0;
    ConvolutionMethod method_;
    std::unique_ptr<FftState> fft_;
};

/// J(j dx) for j < n, rescaled so that dx times the lattice sum over
/// |j| < n matches the kernel mass on the window. A constant is then an exact
/// equilibrium of the discrete dispersal operator on the whole lattice.
std::vector<double> normalized_kernel_row(const Kernel& k, double dx, std::size_t n);

}  // namespace frontlab
