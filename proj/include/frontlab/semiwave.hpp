#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "frontlab/convolution.hpp"
#include "frontlab/kernel.hpp"
#include "frontlab/numerics.hpp"
#include "frontlab/reaction.hpp"

namespace frontlab {

struct SemiWaveParams {
    double L = 40.0;  ///< profile lives on [-L, 0]
    int n_cells = 4000;
    double sigma_homotopy = 0.0;  ///< boundary value phi(0) of the perturbed problem
    double tol_iter = 1e-10;
    int max_iters = 100000;
    double plateau_eps = 1e-2;
    ConvolutionMethod convolution = ConvolutionMethod::Auto;

    void validate() const;
};

/// Defaults by tail class: L = 40 for thin and compact tails (at least four
/// kernel supports), L = 400 for heavy tails, with spacing 0.01 (0.1 for heavy
/// tails).
SemiWaveParams default_semiwave_params(const Kernel& k);

/// Deeper and coarser grid for locating the existence threshold, where
/// profiles develop long shoulders.
SemiWaveParams default_cstar_params(const Kernel& k);

/// Constant M making u -> (cM - d) u + f(u) nondecreasing on [0, 1].
struct MConstant {
    double M = 0.0;
};

/// M = (d + K) / c with K the inflated Lipschitz constant of f.
MConstant choose_M(double c, double d, const Reaction& r);

struct SemiWaveProfile {
    UniformGrid grid{-1.0, 0.0, 2};
    std::vector<double> phi;
    double c = 0.0;
    int iterations_used = 0;
    double residual = 0.0;        ///< sup-norm defect of the discrete stationary equation
    double plateau_value = 0.0;   ///< phi(-L)
    double plateau_level = 1.0;   ///< equilibrium the profile approaches (1 for unit-mass kernels)
    double sigma = 0.0;
    double monotone_violation = 0.0;  ///< max increase between successive iterates
};

enum class SemiWaveStatus { Accepted, NonExistence };

struct SemiWaveResult {
    SemiWaveStatus status = SemiWaveStatus::NonExistence;
    SemiWaveProfile profile;
    std::string diagnostics;

    bool accepted() const { return status == SemiWaveStatus::Accepted; }
};

/// Discretized semi-wave problem for fixed (d, J, f) on the params grid.
///
/// The fixed-point operator integrates -c (e^{-Mx} phi)' = e^{-Mx} F[phi] from
/// x = 0 leftwards, cell by cell, with the trapezoidal rule in the form whose
/// fixed points satisfy
///     c (phi_{i+1} - phi_i) / h + (G_i + G_{i+1}) / 2 = 0,
///     G = d (J * phi) + d sigma a - d phi + f(phi),
/// exactly. When M h > 1 that form loses monotonicity, so e^{-M s} is instead
/// integrated exactly against the linear interpolant of F. The convolution over [-L, 0] is closed by
/// assuming phi equals the plateau level on (-inf, -L), and the local quadrature
/// mass defect is returned through the diagonal so that constants are
/// convolved exactly.
class SemiWaveProblem {
public:
    SemiWaveProblem(double d, Kernel k, Reaction r, SemiWaveParams params);

    const UniformGrid& grid() const { return grid_; }
    const SemiWaveParams& params() const { return params_; }
    const Kernel& kernel() const { return kernel_; }
    const Reaction& reaction() const { return reaction_; }
    double d() const { return d_; }
    double plateau_level() const { return plateau_; }

    /// Trapezoid convolution of phi plus the far-field closure, at every node.
    std::vector<double> inner(std::span<const double> phi);

    std::vector<double> apply_A(std::span<const double> phi, double c, MConstant M, double sigma);

    /// Sup-norm defect of the discrete stationary equation at cell midpoints.
    double residual(std::span<const double> phi, double c, double sigma);

    /// Monotone iteration from `start` (default: the constant plateau level).
    /// A start must be an upper solution for the early plateau rejection to apply.
    SemiWaveResult solve(double c, std::optional<std::span<const double>> start = std::nullopt);

private:
    struct Scheme {
        double rho;
        double alpha;  ///< weight of F_i
        double beta;   ///< weight of F_{i+1}
    };
    Scheme scheme(double c, double M) const;
    std::vector<double> source(std::span<const double> phi, double c, double M, double sigma);

    double d_;
    Kernel kernel_;
    Reaction reaction_;
    SemiWaveParams params_;
    UniformGrid grid_;
    double plateau_;
    std::vector<double> weights_;   ///< trapezoid weights h * {1/2, 1, ..., 1, 1/2}
    std::vector<double> far_field_; ///< a(-x - L)
    std::vector<double> tail_at_;   ///< a(x)
    std::vector<double> mass_defect_;  ///< exact minus discrete kernel mass on [-L, 0], per node
    ToeplitzConvolver conv_;
    std::vector<double> scratch_;
};

/// Equilibrium the semi-wave must approach: 1 for unit-mass kernels, otherwise
/// the zero of f(u) - d (1 - mass) u.
double plateau_level(double d, const Kernel& k, const Reaction& r);

std::vector<double> apply_A(std::span<const double> phi, double c, double d, const Kernel& k,
                            const Reaction& r, MConstant M, double sigma,
                            const SemiWaveParams& params);

SemiWaveResult solve_semiwave(double c, double d, const Kernel& k, const Reaction& r,
                              const SemiWaveParams& params);

struct HalfLevelShift {
    double l = 0.0;
    SemiWaveProfile shifted;  ///< phi(x - l), so shifted phi(0) = 1/2
};

HalfLevelShift half_level_shift(const SemiWaveProfile& p);

/// phi'(0-) through the equation at the free boundary:
/// -(d / c) * integral of J(-y) phi(y) over y < 0.
double front_slope(const SemiWaveProfile& p, double d, const Kernel& k);

/// Linear-determinacy speed min over lambda of [d (Jhat(lambda) - 1) + f'(0)] / lambda.
/// nullopt when the kernel has no finite exponential moment.
std::optional<double> linear_determinacy_speed(double d, const Kernel& k, const Reaction& r);

struct CStarEstimate {
    double c_star = 0.0;
    double lo = 0.0;  ///< largest speed with an accepted profile
    double hi = 0.0;  ///< smallest speed rejected
    std::optional<double> c_linear;
    bool disagreement_warning = false;
    std::string diagnostics;
};

/// Existence threshold of the semi-wave problem by bisection on acceptance.
CStarEstimate estimate_cstar(double d, const Kernel& k, const Reaction& r,
                             const SemiWaveParams& params, double tol_c);

}  // namespace frontlab
