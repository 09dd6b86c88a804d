#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frontlab/convolution.hpp"
#include "frontlab/kernel.hpp"
#include "frontlab/reaction.hpp"
#include "frontlab/semiwave.hpp"

namespace frontlab {

/// Initial density on [-h0, h0], zero at both ends.
struct InitialData {
    enum class Family { Parabola, Cosine };
    Family family = Family::Parabola;  ///< A (1 - (x/h0)^2) or A cos(pi x / (2 h0))
    double amplitude = 1.0;

    double operator()(double x, double h0) const;
};

/// Parses "parabola", "parabola(A)", "cosine" or "cosine(A)".
InitialData parse_initial_data(const std::string& spec);
std::string to_string(const InitialData& u0);

/// Density on the global grid x_j = j dx, j = -N..N, stored as u[j + N].
/// Nodes strictly inside (g, h) are active; u is zero elsewhere and at g, h.
struct FieldState {
    double t = 0.0;
    double g = 0.0;
    double h = 0.0;
    double dx = 0.0;
    std::vector<double> u;

    std::ptrdiff_t half_nodes() const { return static_cast<std::ptrdiff_t>(u.size() / 2); }
    double x(std::size_t idx) const { return static_cast<double>(static_cast<std::ptrdiff_t>(idx) - half_nodes()) * dx; }
    /// First and last active index; first > last when none.
    std::pair<std::size_t, std::size_t> active_range() const;
    /// Value at global node j (zero outside the window).
    double at_node(std::ptrdiff_t j) const;
    double sup_u() const;
    /// Active nodes plus the two boundary points, as (x, u) columns.
    std::pair<std::vector<double>, std::vector<double>> profile() const;
};

FieldState initial_state(double h0, double dx, const InitialData& u0, std::ptrdiff_t half_nodes = 0);

struct Snapshot {
    double t = 0.0;
    std::vector<double> x;
    std::vector<double> u;
};

struct FrontTrajectory {
    std::vector<double> t;
    std::vector<double> g;
    std::vector<double> h;
    std::vector<Snapshot> snapshots;

    std::size_t size() const { return t.size(); }
    void record(double ti, double gi, double hi);
};

struct SimConfig {
    double d = 1.0;
    double mu = 1.0;
    double h0 = 10.0;
    double T = 200.0;
    double dx = 0.1;
    double sample_dt = 0.5;
    double snap_dt = 0.0;  ///< 0 disables snapshots
    InitialData u0;
    std::optional<double> v_cap;  ///< boundary speed cap when the kernel has no finite c(J)
    std::optional<double> dt;     ///< fixed step override
    ConvolutionMethod convolution = ConvolutionMethod::Auto;

    void validate() const;
};

struct StepStats {
    long clamp_below = 0;  ///< u < 0 after a step, reset to 0
    long clamp_above = 0;  ///< u > M0star after a step, reset to M0star
    double flux_h = 0.0;   ///< h' at the start of the last step
    double flux_g = 0.0;   ///< -g' at the start of the last step
};

/// Explicit Euler time stepper for the free-boundary system.
class FreeBoundarySolver {
public:
    FreeBoundarySolver(FieldState s, double d, double mu, Kernel k, Reaction r, double M0star,
                       ConvolutionMethod method = ConvolutionMethod::Auto);
    ~FreeBoundarySolver();
    FreeBoundarySolver(FreeBoundarySolver&&) noexcept;
    FreeBoundarySolver& operator=(FreeBoundarySolver&&) noexcept;

    const FieldState& state() const { return state_; }
    const StepStats& stats() const { return stats_; }

    /// Current boundary speeds (h', -g').
    std::pair<double, double> fluxes();
    /// Largest dt accepted by step: positivity of the Euler update and boundary
    /// motion below half a cell.
    double stability_bound();
    /// Throws StepRejected when dt exceeds stability_bound().
    void step(double dt);

private:
    struct Impl;
    void ensure_capacity();
    void rebuild();

    FieldState state_;
    double d_;
    double mu_;
    Kernel kernel_;
    Reaction reaction_;
    double M0star_;
    ConvolutionMethod method_;
    StepStats stats_;
    std::unique_ptr<Impl> impl_;
};

/// One explicit Euler step (builds a throwaway solver).
FieldState step(const FieldState& s, double dt, double d, double mu, const Kernel& k,
                const Reaction& r);

/// dt = min(0.2 / (d + K), 0.25 dx / V_cap), V_cap = mu M0star c(J) or the
/// configured cap. nullopt when neither is available (adaptive stepping).
std::optional<double> default_time_step(const SimConfig& cfg, const Kernel& k, const Reaction& r);

struct SimulationResult {
    FrontTrajectory trajectory;
    FieldState final_state;
    StepStats stats;
    long steps = 0;
    double dt_min = 0.0;
    double dt_max = 0.0;
    double max_asymmetry = 0.0;  ///< max |g + h| over all steps
};

SimulationResult simulate(const SimConfig& cfg, const Kernel& k, const Reaction& r);

enum class OutcomeTag { Spreading, Vanishing, Undecided };
std::string to_string(OutcomeTag t);

struct OutcomeThresholds {
    double span_factor = 10.0;  ///< span_threshold = span_factor * h0
    double core_eps = 0.05;
    double vanish_eps = 1e-6;
    double stall_eps = 1e-6;
    double window_fraction = 0.1;  ///< tail of the trajectory used for front speeds
};

struct Outcome {
    OutcomeTag tag = OutcomeTag::Undecided;
    double span = 0.0;
    double core_min = 0.0;
    double sup_u = 0.0;
    double front_speed = 0.0;  ///< h' + |g'| over the last window
    std::string evidence;
};

Outcome classify_outcome(const FrontTrajectory& traj, const FieldState& final_state, double h0,
                         const OutcomeThresholds& th = {});

struct SpeedMeasurement {
    double slope_h = 0.0;
    double slope_g = 0.0;
    std::vector<std::pair<double, double>> windows;  ///< dyadic [t0, t1], earliest first
    std::vector<double> dyadic_slopes;               ///< slope of h on each window
};

/// Slopes over the last window_fraction of the time span and over n_windows
/// dyadic windows [T 2^-k, T 2^-k+1], k = n..1. Throws InsufficientData when a
/// window holds fewer than two samples or n_windows < 4.
SpeedMeasurement measure_speed(const FrontTrajectory& traj, double window_fraction = 0.5,
                               int n_windows = 5);

struct TruncatedSpeed {
    double R = 0.0;
    double sigma_n = 0.0;
    double eta_n = 0.0;
    std::optional<double> c_n;
    std::string error;
};

/// c0 for each truncated kernel J_n. The semi-wave of J_n approaches the zero
/// of the adjusted reaction f - d (1 - sigma_n) u. Per-entry errors are kept.
std::vector<TruncatedSpeed> truncated_speed_sequence(const Kernel& k, const std::vector<double>& radii,
                                                     double d, double mu, const Reaction& r,
                                                     double ramp = 1.0, double tol = 1e-8);

/// Largest eigenvalue of d int_{-l}^{l} J(x-y) phi(y) dy - d phi + a phi on a
/// trapezoid grid with n_cells cells, by power iteration on the symmetrized
/// operator. The sampled kernel is rescaled to its mass on the lattice.
double principal_eigenvalue(double ell, double d, const Kernel& k, double a_const, int n_cells = 400);

}  // namespace frontlab
