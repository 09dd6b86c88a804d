#include "frontlab/numerics.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <string>

#include "frontlab/errors.hpp"

namespace frontlab {

UniformGrid::UniformGrid(double left, double right, int n_cells)
    : left_(left), right_(right), n_cells_(n_cells), spacing_(0.0) {
    if (!(left < right)) {
        throw InvalidArgument("UniformGrid: left must be < right");
    }
    if (n_cells < 2) {
        throw InvalidArgument("UniformGrid: n_cells must be >= 2");
    }
    spacing_ = (right - left) / n_cells;
}

double UniformGrid::node(std::size_t j) const {
    if (j == static_cast<std::size_t>(n_cells_)) return right_;
    return left_ + static_cast<double>(j) * spacing_;
}

double trapezoid(std::span<const double> values, const UniformGrid& grid) {
    if (values.size() != grid.size()) {
        throw InvalidArgument("trapezoid: expected " + std::to_string(grid.size()) +
                              " samples, got " + std::to_string(values.size()));
    }
    double interior = 0.0;
    for (std::size_t j = 1; j + 1 < values.size(); ++j) interior += values[j];
    return grid.spacing() * (interior + 0.5 * (values.front() + values.back()));
}

BisectionResult bisect_bracket(const std::function<double(double)>& G, double lo, double hi,
                               double ftol, double xtol, int max_iter) {
    if (!(lo < hi)) throw InvalidArgument("bisect: lo must be < hi");
    if (!(ftol > 0.0) || !(xtol > 0.0)) throw InvalidArgument("bisect: tolerances must be > 0");

    const double g_lo = G(lo);
    const double g_hi = G(hi);
    if (!(g_lo < 0.0 && g_hi > 0.0)) {
        throw BracketError("bisect: G(lo)=" + std::to_string(g_lo) + ", G(hi)=" +
                           std::to_string(g_hi) + " do not bracket a root");
    }

    BisectionResult r;
    r.lo = lo;
    r.hi = hi;
    r.root = 0.5 * (lo + hi);
    r.value = (std::abs(g_lo) < std::abs(g_hi)) ? g_lo : g_hi;
    for (int it = 0; it < max_iter; ++it) {
        const double mid = 0.5 * (r.lo + r.hi);
        const double g_mid = G(mid);
        r.root = mid;
        r.value = g_mid;
        r.iterations = it + 1;
        if (std::abs(g_mid) <= ftol) break;
        if (g_mid < 0.0) {
            r.lo = mid;
        } else {
            r.hi = mid;
        }
        if (r.hi - r.lo <= xtol) {
            r.root = 0.5 * (r.lo + r.hi);
            break;
        }
    }
    return r;
}

double bisect(const std::function<double(double)>& G, double lo, double hi, double tol) {
    return bisect_bracket(G, lo, hi, tol, tol).root;
}

ScalarMinimum minimize_scalar(const std::function<double(double)>& g, double lo, double hi,
                              double tol) {
    if (!(lo < hi)) throw InvalidArgument("minimize_scalar: lo must be < hi");
    if (!(tol > 0.0)) throw InvalidArgument("minimize_scalar: tol must be > 0");

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = g(x1);
    double f2 = g(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = g(x2);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, g(x)};
}

double fit_slope(std::span<const double> ts, std::span<const double> xs) {
    if (ts.size() != xs.size()) throw InvalidArgument("fit_slope: length mismatch");
    if (ts.size() < 2) throw InvalidArgument("fit_slope: need at least two samples");
    for (std::size_t i = 1; i < ts.size(); ++i) {
        if (!(ts[i] > ts[i - 1])) throw InvalidArgument("fit_slope: ts must be strictly increasing");
    }
    const double n = static_cast<double>(ts.size());
    double t_mean = 0.0;
    double x_mean = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        t_mean += ts[i];
        x_mean += xs[i];
    }
    t_mean /= n;
    x_mean /= n;
    double stt = 0.0;
    double stx = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double dt = ts[i] - t_mean;
        stt += dt * dt;
        stx += dt * (xs[i] - x_mean);
    }
    if (!(stt > 0.0)) throw InvalidArgument("fit_slope: degenerate abscissae");
    return stx / stt;
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss<double, 20>::integrate(f, a, b);
}

double gauss_legendre_composite(const std::function<double(double)>& f, double a, double b,
                                int panels) {
    if (panels < 1) throw InvalidArgument("gauss_legendre_composite: panels must be >= 1");
    const double w = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * w;
        const double hi = (p + 1 == panels) ? b : lo + w;
        sum += gauss_legendre(f, lo, hi);
    }
    return sum;
}

}  // namespace frontlab
