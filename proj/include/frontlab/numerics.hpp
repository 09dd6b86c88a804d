#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace frontlab {

/// Uniform grid on [left, right] with n_cells cells and n_cells + 1 nodes.
class UniformGrid {
public:
    UniformGrid(double left, double right, int n_cells);

    double left() const { return left_; }
    double right() const { return right_; }
    int n_cells() const { return n_cells_; }
    std::size_t size() const { return static_cast<std::size_t>(n_cells_) + 1; }
    double spacing() const { return spacing_; }

    /// Node j sits at left + j * spacing; the last node is pinned to right.
    double node(std::size_t j) const;

private:
    double left_;
    double right_;
    int n_cells_;
    double spacing_;
};

/// Composite trapezoid rule over a grid. values.size() must equal grid.size().
double trapezoid(std::span<const double> values, const UniformGrid& grid);

struct BisectionResult {
    double root = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double value = 0.0;  ///< G(root)
    int iterations = 0;
};

/// Bisection for an increasing G with G(lo) < 0 < G(hi).
///
/// Stops as soon as |G(mid)| <= ftol or the bracket is narrower than xtol.
/// Throws BracketError if the end points do not bracket a sign change.
BisectionResult bisect_bracket(const std::function<double(double)>& G, double lo, double hi,
                               double ftol, double xtol, int max_iter = 200);

/// Convenience form with a single tolerance used for both criteria.
double bisect(const std::function<double(double)>& G, double lo, double hi, double tol);

struct ScalarMinimum {
    double argmin = 0.0;
    double min = 0.0;
};

/// Golden-section search for a unimodal g on [lo, hi].
ScalarMinimum minimize_scalar(const std::function<double(double)>& g, double lo, double hi,
                              double tol);

/// Ordinary least-squares slope of xs against ts.
double fit_slope(std::span<const double> ts, std::span<const double> xs);

/// Fixed-order Gauss-Legendre rule on [a, b] (20 nodes).
double gauss_legendre(const std::function<double(double)>& f, double a, double b);

/// Composite Gauss-Legendre with `panels` equal panels.
double gauss_legendre_composite(const std::function<double(double)>& f, double a, double b,
                                int panels);

}  // namespace frontlab
