#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "frontlab/fbsim.hpp"

namespace frontlab {

struct CauchyState {
    UniformGrid grid{-1.0, 1.0, 2};  ///< [-X, X], nodes aligned with j dx
    std::vector<double> u;
    double t = 0.0;
};

/// Outermost crossings x_minus <= x_plus of u = lambda, recorded only at
/// sample times where the level is attained.
struct LevelSetTrack {
    double lambda = 0.5;
    std::vector<double> t;
    std::vector<double> x_minus;
    std::vector<double> x_plus;
};

/// Outermost linear-interpolated crossings of u = lambda; nullopt when
/// max u < lambda.
std::optional<std::pair<double, double>> level_crossings(const CauchyState& s, double lambda);

struct CauchyConfig {
    double d = 1.0;
    double h0 = 10.0;
    double T = 50.0;
    double dx = 0.1;
    double X = 0.0;  ///< half-width; 0 picks 8 T times the linear-determinacy speed
    double sample_dt = 0.5;
    double snap_dt = 0.0;
    InitialData u0;
    std::vector<double> levels{0.5};
    double boundary_eps = 1e-8;
    std::optional<double> dt;
    ConvolutionMethod convolution = ConvolutionMethod::Auto;

    void validate() const;
};

/// Half-width actually used: the configured or automatic X, rounded up to a
/// whole number of cells and at least 2 h0.
double resolve_half_width(const CauchyConfig& cfg, const Kernel& k, const Reaction& r);

class CauchySolver {
public:
    CauchySolver(CauchyState s, double d, Kernel k, Reaction r, double M0star,
                 ConvolutionMethod method = ConvolutionMethod::Auto);
    ~CauchySolver();
    CauchySolver(CauchySolver&&) noexcept;
    CauchySolver& operator=(CauchySolver&&) noexcept;

    const CauchyState& state() const { return state_; }
    long clamp_count() const { return clamps_; }
    /// max(u(-X), u(X)) seen so far.
    double boundary_max() const { return boundary_max_; }
    /// Value at the global node j dx (zero outside the grid).
    double at_node(std::ptrdiff_t j) const;
    void step(double dt);

private:
    struct Impl;
    CauchyState state_;
    double d_;
    Reaction reaction_;
    double M0star_;
    long clamps_ = 0;
    double boundary_max_ = 0.0;
    std::ptrdiff_t offset_ = 0;  ///< index of x = 0
    std::unique_ptr<Impl> impl_;
};

CauchyState cauchy_initial_state(double X, double dx, double h0, const InitialData& u0);

/// One explicit Euler step of u_t = d (J * u - u) + f(u) on the truncated line.
CauchyState cauchy_step(const CauchyState& s, double dt, double d, const Kernel& k, const Reaction& r);

struct CauchyResult {
    CauchyState final_state;
    std::vector<LevelSetTrack> tracks;
    std::vector<Snapshot> snapshots;
    bool domain_too_small = false;
    double boundary_max = 0.0;
    long clamp_count = 0;
    long steps = 0;
    double dt = 0.0;
};

CauchyResult cauchy_simulate(const CauchyConfig& cfg, const Kernel& k, const Reaction& r);

struct MuLimitConfig {
    SimConfig base;      ///< d, h0, T, dx, u0 shared by every run; mu ignored
    double window = 20.0;  ///< compare on [-window, window]
    double X = 0.0;        ///< whole-line half-width, 0 for automatic
    std::optional<double> dt;
};

struct MuLimitEntry {
    double mu = 0.0;
    double excess = 0.0;    ///< sup (u_mu - u_*)_+
    double abs_diff = 0.0;  ///< sup |u_mu - u_*|
    double g_T = 0.0;
    double h_T = 0.0;
};

struct MuLimitReport {
    std::vector<MuLimitEntry> entries;
    double dt = 0.0;
    long steps = 0;
    double X = 0.0;
    bool domain_too_small = false;
};

/// Runs the free-boundary problem at each mu and the whole-line problem once,
/// in lockstep with one shared dt, and compares them at every step on the
/// window.
MuLimitReport compare_mu_limit(const std::vector<double>& mus, const MuLimitConfig& cfg,
                               const Kernel& k, const Reaction& r);

}  // namespace frontlab
