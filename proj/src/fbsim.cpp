#include "frontlab/fbsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "frontlab/errors.hpp"
#include "frontlab/numerics.hpp"
#include "frontlab/speed.hpp"

namespace frontlab {

double InitialData::operator()(double x, double h0) const {
    const double s = x / h0;
    if (std::abs(s) >= 1.0) return 0.0;
    switch (family) {
        case Family::Parabola:
            return amplitude * (1.0 - s * s);
        case Family::Cosine:
            return amplitude * std::cos(0.5 * std::numbers::pi * s);
    }
    return 0.0;
}

InitialData parse_initial_data(const std::string& spec) {
    InitialData u0;
    std::string name = spec;
    const auto open = spec.find('(');
    if (open != std::string::npos) {
        const auto close = spec.find(')', open);
        if (close == std::string::npos || close + 1 != spec.size()) {
            throw InvalidArgument("initial data: malformed '" + spec + "'");
        }
        name = spec.substr(0, open);
        try {
            std::size_t used = 0;
            const std::string arg = spec.substr(open + 1, close - open - 1);
            u0.amplitude = std::stod(arg, &used);
            if (used != arg.size()) throw std::invalid_argument(arg);
        } catch (const std::exception&) {
            throw InvalidArgument("initial data: bad amplitude in '" + spec + "'");
        }
    }
    if (name == "parabola") {
        u0.family = InitialData::Family::Parabola;
    } else if (name == "cosine") {
        u0.family = InitialData::Family::Cosine;
    } else {
        throw InvalidArgument("initial data: unknown family '" + name + "'");
    }
    if (!(u0.amplitude > 0.0)) throw InvalidArgument("initial data: amplitude must be > 0");
    return u0;
}

std::string to_string(const InitialData& u0) {
    std::ostringstream os;
    os << (u0.family == InitialData::Family::Parabola ? "parabola" : "cosine") << "("
       << u0.amplitude << ")";
    return os.str();
}

// ---------------------------------------------------------------------------
// FieldState

namespace {

// Smallest j with j dx > g and largest j with j dx < h.
std::ptrdiff_t first_inside(double g, double dx) {
    auto j = static_cast<std::ptrdiff_t>(std::floor(g / dx)) + 1;
    while (static_cast<double>(j - 1) * dx > g) --j;
    while (static_cast<double>(j) * dx <= g) ++j;
    return j;
}

std::ptrdiff_t last_inside(double h, double dx) {
    auto j = static_cast<std::ptrdiff_t>(std::ceil(h / dx)) - 1;
    while (static_cast<double>(j + 1) * dx < h) ++j;
    while (static_cast<double>(j) * dx >= h) --j;
    return j;
}

}  // namespace

std::pair<std::size_t, std::size_t> FieldState::active_range() const {
    const std::ptrdiff_t n = half_nodes();
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(first_inside(g, dx), -n) + n;
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(last_inside(h, dx), n) + n;
    if (hi < lo) return {1, 0};
    return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

double FieldState::at_node(std::ptrdiff_t j) const {
    const std::ptrdiff_t idx = j + half_nodes();
    if (idx < 0 || idx >= static_cast<std::ptrdiff_t>(u.size())) return 0.0;
    return u[static_cast<std::size_t>(idx)];
}

double FieldState::sup_u() const {
    double m = 0.0;
    for (double v : u) m = std::max(m, v);
    return m;
}

std::pair<std::vector<double>, std::vector<double>> FieldState::profile() const {
    std::vector<double> xs{g};
    std::vector<double> us{0.0};
    const auto [lo, hi] = active_range();
    for (std::size_t i = lo; i <= hi && lo <= hi; ++i) {
        xs.push_back(x(i));
        us.push_back(u[i]);
    }
    xs.push_back(h);
    us.push_back(0.0);
    return {xs, us};
}

FieldState initial_state(double h0, double dx, const InitialData& u0, std::ptrdiff_t half_nodes) {
    if (!(h0 > 0.0)) throw InvalidArgument("initial_state: h0 must be > 0");
    if (!(dx > 0.0) || !(dx < h0)) throw InvalidArgument("initial_state: need 0 < dx < h0");
    const auto needed = static_cast<std::ptrdiff_t>(std::ceil(2.0 * h0 / dx)) + 16;
    const std::ptrdiff_t n = std::max({half_nodes, needed, std::ptrdiff_t{64}});
    FieldState s;
    s.g = -h0;
    s.h = h0;
    s.dx = dx;
    s.u.assign(static_cast<std::size_t>(2 * n + 1), 0.0);
    const auto [lo, hi] = s.active_range();
    for (std::size_t i = lo; i <= hi; ++i) s.u[i] = u0(s.x(i), h0);
    return s;
}

void FrontTrajectory::record(double ti, double gi, double hi) {
    t.push_back(ti);
    g.push_back(gi);
    h.push_back(hi);
}

void SimConfig::validate() const {
    std::vector<std::string> bad;
    if (!(d > 0.0)) bad.push_back("d must be > 0");
    if (!(mu >= 0.0)) bad.push_back("mu must be >= 0");
    if (!(h0 > 0.0)) bad.push_back("h0 must be > 0");
    if (!(T > 0.0)) bad.push_back("T must be > 0");
    if (!(dx > 0.0 && dx < h0)) bad.push_back("dx must lie in (0, h0)");
    if (!(sample_dt > 0.0)) bad.push_back("sample_dt must be > 0");
    if (!(snap_dt >= 0.0)) bad.push_back("snap_dt must be >= 0");
    if (v_cap && !(*v_cap > 0.0)) bad.push_back("v_cap must be > 0");
    if (dt && !(*dt > 0.0)) bad.push_back("dt must be > 0");
    if (!bad.empty()) {
        std::string msg = "SimConfig:";
        for (const auto& b : bad) msg += " " + b + ";";
        throw InvalidArgument(msg);
    }
}

// ---------------------------------------------------------------------------
// FreeBoundarySolver

struct FreeBoundarySolver::Impl {
    ToeplitzConvolver conv;
    std::vector<double> tail;     ///< a(-k dx)
    std::vector<double> density;  ///< J(k dx)
    std::vector<double> weighted;
    std::vector<double> convolved;

    Impl(const Kernel& k, double dx, std::size_t n, ConvolutionMethod method)
        : conv(row(k, dx, n), method), weighted(n, 0.0), convolved(n, 0.0) {
        tail.resize(2 * n + 2);
        density.resize(2 * n + 2);
        for (std::size_t j = 0; j < tail.size(); ++j) {
            const double x = static_cast<double>(j) * dx;
            tail[j] = k.tail_mass(-x);
            density[j] = k.density(x);
        }
    }

    static std::vector<double> row(const Kernel& k, double dx, std::size_t n) {
        return normalized_kernel_row(k, dx, n);
    }
};

namespace {

// Overshoot of M0star attributable to rounding; not counted as clamping.
constexpr double kRoundoff = 1e-12;

// a(-(k + theta) dx) by cubic Hermite interpolation with exact slopes -dx J.
struct TailInterp {
    double c0, c1, c2, c3;

    TailInterp(double theta, double dx) {
        const double t2 = theta * theta;
        const double t3 = t2 * theta;
        c0 = 2.0 * t3 - 3.0 * t2 + 1.0;
        c1 = -dx * (t3 - 2.0 * t2 + theta);
        c2 = -2.0 * t3 + 3.0 * t2;
        c3 = -dx * (t3 - t2);
    }

    double operator()(const std::vector<double>& a, const std::vector<double>& J, std::size_t k) const {
        return c0 * a[k] + c1 * J[k] + c2 * a[k + 1] + c3 * J[k + 1];
    }
};

}  // namespace

FreeBoundarySolver::FreeBoundarySolver(FieldState s, double d, double mu, Kernel k, Reaction r,
                                       double M0star, ConvolutionMethod method)
    : state_(std::move(s)),
      d_(d),
      mu_(mu),
      kernel_(std::move(k)),
      reaction_(std::move(r)),
      M0star_(M0star),
      method_(method) {
    if (!(d > 0.0)) throw InvalidArgument("FreeBoundarySolver: d must be > 0");
    if (!(mu >= 0.0)) throw InvalidArgument("FreeBoundarySolver: mu must be >= 0");
    if (!(state_.g < state_.h)) throw InvalidArgument("FreeBoundarySolver: need g < h");
    if (!kernel_.has_tail_mass()) {
        throw UnsupportedTail("FreeBoundarySolver: kernel '" + kernel_.name() + "' has no tail mass");
    }
    if (state_.u.size() % 2 == 0) throw InvalidArgument("FreeBoundarySolver: node count must be odd");
    ensure_capacity();
    if (!impl_) rebuild();
}

FreeBoundarySolver::~FreeBoundarySolver() = default;
FreeBoundarySolver::FreeBoundarySolver(FreeBoundarySolver&&) noexcept = default;
FreeBoundarySolver& FreeBoundarySolver::operator=(FreeBoundarySolver&&) noexcept = default;

void FreeBoundarySolver::rebuild() {
    impl_ = std::make_unique<Impl>(kernel_, state_.dx, state_.u.size(), method_);
}

void FreeBoundarySolver::ensure_capacity() {
    const double reach = std::max(state_.h, -state_.g);
    std::ptrdiff_t n = state_.half_nodes();
    if (reach < static_cast<double>(n - 4) * state_.dx) return;
    std::ptrdiff_t grown = n;
    while (reach >= static_cast<double>(grown - 4) * state_.dx) grown *= 2;
    std::vector<double> u(static_cast<std::size_t>(2 * grown + 1), 0.0);
    std::copy(state_.u.begin(), state_.u.end(), u.begin() + (grown - n));
    state_.u = std::move(u);
    rebuild();
}

std::pair<double, double> FreeBoundarySolver::fluxes() {
    FieldState& s = state_;
    const auto [lo, hi] = s.active_range();
    if (lo > hi || mu_ == 0.0) return {0.0, 0.0};
    const double dx = s.dx;
    const std::ptrdiff_t n = s.half_nodes();

    // Trapezoid weights with partial end cells; u vanishes at g and h.
    auto& w = impl_->weighted;
    std::fill(w.begin(), w.end(), 0.0);
    for (std::size_t i = lo; i <= hi; ++i) w[i] = dx * s.u[i];
    w[lo] = 0.5 * (dx + (s.x(lo) - s.g)) * s.u[lo];
    w[hi] = 0.5 * (dx + (s.h - s.x(hi))) * s.u[hi];
    if (lo == hi) w[lo] = 0.5 * (s.h - s.g) * s.u[lo];

    const double mh = std::floor(s.h / dx);
    const double mg = std::floor(-s.g / dx);
    const TailInterp right(s.h / dx - mh, dx);
    const TailInterp left(-s.g / dx - mg, dx);
    const auto kh = static_cast<std::ptrdiff_t>(mh);
    const auto kg = static_cast<std::ptrdiff_t>(mg);
    double fh = 0.0;
    double fg = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) {
        const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) - n;
        fh += w[i] * right(impl_->tail, impl_->density, static_cast<std::size_t>(kh - j));
        fg += w[i] * left(impl_->tail, impl_->density, static_cast<std::size_t>(kg + j));
    }
    return {mu_ * fh, mu_ * fg};
}

double FreeBoundarySolver::stability_bound() {
    const auto [fh, fg] = fluxes();
    double bound = 1.0 / (d_ + reaction_.effective_lipschitz());
    const double v = std::max(fh, fg);
    if (v > 0.0) bound = std::min(bound, 0.5 * state_.dx / v);
    return bound;
}

void FreeBoundarySolver::step(double dt) {
    if (!(dt > 0.0)) throw InvalidArgument("step: dt must be > 0");
    const auto [fh, fg] = fluxes();  // also fills the weighted density
    double bound = 1.0 / (d_ + reaction_.effective_lipschitz());
    const double v = std::max(fh, fg);
    if (v > 0.0) bound = std::min(bound, 0.5 * state_.dx / v);
    if (dt > bound * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "step: dt = " << dt << " exceeds the stability bound " << bound;
        throw StepRejected(os.str());
    }

    FieldState& s = state_;
    const auto [lo, hi] = s.active_range();
    if (lo <= hi) {
        if (mu_ == 0.0) {
            // fluxes() skipped the weights.
            auto& w = impl_->weighted;
            std::fill(w.begin(), w.end(), 0.0);
            for (std::size_t i = lo; i <= hi; ++i) w[i] = s.dx * s.u[i];
            w[lo] = 0.5 * (s.dx + (s.x(lo) - s.g)) * s.u[lo];
            w[hi] = 0.5 * (s.dx + (s.h - s.x(hi))) * s.u[hi];
            if (lo == hi) w[lo] = 0.5 * (s.h - s.g) * s.u[lo];
        }
        impl_->conv.apply(impl_->weighted, impl_->convolved);
        const auto& cu = impl_->convolved;
        for (std::size_t i = lo; i <= hi; ++i) {
            double next = s.u[i] + dt * (d_ * cu[i] - d_ * s.u[i] + reaction_(s.u[i]));
            if (next < 0.0) {
                next = 0.0;
                ++stats_.clamp_below;
            } else if (next > M0star_) {
                if (next > M0star_ * (1.0 + kRoundoff)) ++stats_.clamp_above;
                next = M0star_;
            }
            s.u[i] = next;
        }
    }
    stats_.flux_h = fh;
    stats_.flux_g = fg;
    s.h += dt * fh;
    s.g -= dt * fg;
    s.t += dt;
    ensure_capacity();
}

FieldState step(const FieldState& s, double dt, double d, double mu, const Kernel& k,
                const Reaction& r) {
    const double m0 = std::max(s.sup_u(), r.cap_K0());
    FreeBoundarySolver solver(s, d, mu, k, r, m0);
    solver.step(dt);
    return solver.state();
}

std::optional<double> default_time_step(const SimConfig& cfg, const Kernel& k, const Reaction& r) {
    const double reaction_dt = 0.2 / (cfg.d + r.effective_lipschitz());
    const double m0 = std::max(cfg.u0.amplitude, r.cap_K0());
    std::optional<double> v;
    if (cfg.v_cap) {
        v = *cfg.v_cap;
    } else if (has_finite_tail_integral(k.tail_class())) {
        v = cfg.mu * m0 * c_of_J(k);
    } else {
        return std::nullopt;
    }
    if (*v <= 0.0) return reaction_dt;
    return std::min(reaction_dt, 0.25 * cfg.dx / *v);
}

SimulationResult simulate(const SimConfig& cfg, const Kernel& k, const Reaction& r) {
    cfg.validate();
    const double m0 = std::max(cfg.u0.amplitude, r.cap_K0());
    FreeBoundarySolver solver(initial_state(cfg.h0, cfg.dx, cfg.u0), cfg.d, cfg.mu, k, r, m0,
                              cfg.convolution);

    SimulationResult res;
    const auto n_samples = static_cast<long>(std::llround(cfg.T / cfg.sample_dt));
    if (n_samples < 1) throw InvalidArgument("simulate: T must be at least sample_dt");
    const long snap_every =
        cfg.snap_dt > 0.0 ? std::max(1L, std::lround(cfg.snap_dt / cfg.sample_dt)) : 0;

    auto record = [&](long sample) {
        const FieldState& s = solver.state();
        res.trajectory.record(s.t, s.g, s.h);
        if (snap_every > 0 && sample % snap_every == 0) {
            auto [xs, us] = s.profile();
            res.trajectory.snapshots.push_back({s.t, std::move(xs), std::move(us)});
        }
    };
    auto track = [&](double dt) {
        const FieldState& s = solver.state();
        res.max_asymmetry = std::max(res.max_asymmetry, std::abs(s.g + s.h));
        res.dt_min = res.steps == 0 ? dt : std::min(res.dt_min, dt);
        res.dt_max = std::max(res.dt_max, dt);
        ++res.steps;
    };

    record(0);
    const std::optional<double> fixed = cfg.dt ? cfg.dt : default_time_step(cfg, k, r);
    if (fixed) {
        // Whole steps per sample interval, so sample times are hit exactly.
        const long per_sample = std::max(1L, static_cast<long>(std::ceil(cfg.sample_dt / *fixed - 1e-9)));
        const double dt = cfg.sample_dt / static_cast<double>(per_sample);
        for (long sample = 1; sample <= n_samples; ++sample) {
            for (long j = 0; j < per_sample; ++j) {
                solver.step(dt);
                track(dt);
            }
            record(sample);
        }
    } else {
        const double reaction_dt = 0.2 / (cfg.d + r.effective_lipschitz());
        for (long sample = 1; sample <= n_samples; ++sample) {
            const double target = static_cast<double>(sample) * cfg.sample_dt;
            while (solver.state().t < target) {
                const auto [fh, fg] = solver.fluxes();
                double dt = reaction_dt;
                const double v = std::max(fh, fg);
                if (v > 0.0) dt = std::min(dt, 0.25 * cfg.dx / v);
                const double remaining = target - solver.state().t;
                if (dt >= remaining * (1.0 - 1e-9)) dt = remaining;
                solver.step(dt);
                track(dt);
            }
            record(sample);
        }
    }
    res.final_state = solver.state();
    res.stats = solver.stats();
    return res;
}

// ---------------------------------------------------------------------------
// Outcome and speed

std::string to_string(OutcomeTag t) {
    switch (t) {
        case OutcomeTag::Spreading:
            return "Spreading";
        case OutcomeTag::Vanishing:
            return "Vanishing";
        case OutcomeTag::Undecided:
            return "Undecided";
    }
    return "Undecided";
}

namespace {

// Samples with t in [t0, t1], as index range [first, last).
std::pair<std::size_t, std::size_t> window(const std::vector<double>& t, double t0, double t1) {
    const double slack = 1e-9 * std::max(1.0, std::abs(t1));
    const auto first = std::lower_bound(t.begin(), t.end(), t0 - slack) - t.begin();
    const auto last = std::upper_bound(t.begin(), t.end(), t1 + slack) - t.begin();
    return {static_cast<std::size_t>(first), static_cast<std::size_t>(last)};
}

double slope_on(const std::vector<double>& t, const std::vector<double>& x, std::size_t first,
                std::size_t last) {
    return fit_slope(std::span<const double>(t).subspan(first, last - first),
                     std::span<const double>(x).subspan(first, last - first));
}

}  // namespace

Outcome classify_outcome(const FrontTrajectory& traj, const FieldState& s, double h0,
                         const OutcomeThresholds& th) {
    Outcome out;
    out.span = s.h - s.g;
    out.sup_u = s.sup_u();
    out.core_min = std::numeric_limits<double>::infinity();
    const auto jmax = static_cast<std::ptrdiff_t>(std::floor(h0 / s.dx));
    for (std::ptrdiff_t j = -jmax; j <= jmax; ++j) out.core_min = std::min(out.core_min, s.at_node(j));

    if (traj.size() >= 2) {
        const double t_end = traj.t.back();
        const double t0 = t_end - th.window_fraction * (t_end - traj.t.front());
        auto [first, last] = window(traj.t, t0, t_end);
        if (last - first < 2) first = last - 2;
        out.front_speed = slope_on(traj.t, traj.h, first, last) - slope_on(traj.t, traj.g, first, last);
    }

    const bool spread = out.span >= th.span_factor * h0 && out.core_min >= 1.0 - th.core_eps;
    const bool vanish = out.sup_u <= th.vanish_eps && std::abs(out.front_speed) <= th.stall_eps;
    out.tag = spread ? OutcomeTag::Spreading : vanish ? OutcomeTag::Vanishing : OutcomeTag::Undecided;

    std::ostringstream os;
    os << "span " << out.span << " (threshold " << th.span_factor * h0 << "), core min u "
       << out.core_min << ", sup u " << out.sup_u << ", front speed " << out.front_speed;
    out.evidence = os.str();
    return out;
}

SpeedMeasurement measure_speed(const FrontTrajectory& traj, double window_fraction, int n_windows) {
    if (!(window_fraction > 0.0 && window_fraction <= 1.0)) {
        throw InvalidArgument("measure_speed: window_fraction must lie in (0, 1]");
    }
    if (n_windows < 4) throw InsufficientData("measure_speed: need at least 4 dyadic windows");
    if (traj.size() < 2) throw InsufficientData("measure_speed: fewer than two samples");
    const double t_end = traj.t.back();
    if (!(t_end > 0.0)) throw InsufficientData("measure_speed: trajectory has no time span");

    SpeedMeasurement m;
    const auto [first, last] = window(traj.t, t_end - window_fraction * (t_end - traj.t.front()), t_end);
    if (last - first < 2) throw InsufficientData("measure_speed: final window holds < 2 samples");
    m.slope_h = slope_on(traj.t, traj.h, first, last);
    m.slope_g = slope_on(traj.t, traj.g, first, last);

    for (int k = n_windows; k >= 1; --k) {
        const double t0 = std::ldexp(t_end, -k);
        const double t1 = std::ldexp(t_end, -k + 1);
        const auto [a, b] = window(traj.t, t0, t1);
        if (b - a < 2) {
            std::ostringstream os;
            os << "measure_speed: dyadic window [" << t0 << ", " << t1 << "] holds < 2 samples";
            throw InsufficientData(os.str());
        }
        m.windows.emplace_back(t0, t1);
        m.dyadic_slopes.push_back(slope_on(traj.t, traj.h, a, b));
    }
    return m;
}

// ---------------------------------------------------------------------------
// Truncation and principal eigenvalue

std::vector<TruncatedSpeed> truncated_speed_sequence(const Kernel& k, const std::vector<double>& radii,
                                                     double d, double mu, const Reaction& r,
                                                     double ramp, double tol) {
    for (std::size_t i = 1; i < radii.size(); ++i) {
        if (!(radii[i] > radii[i - 1])) {
            throw InvalidArgument("truncated_speed_sequence: radii must be strictly increasing");
        }
    }
    std::vector<TruncatedSpeed> out;
    for (double R : radii) {
        TruncatedSpeed e;
        e.R = R;
        try {
            const TruncatedKernel tk = truncate(k, R, ramp);
            e.sigma_n = tk.sigma_n;
            e.eta_n = adjust_for_truncation(r, tk.sigma_n, d).eta_n;
            e.c_n = solve_c0(mu, d, tk.kernel, r, default_semiwave_params(tk.kernel), tol).c0;
        } catch (const std::exception& ex) {
            e.error = ex.what();
        }
        out.push_back(std::move(e));
    }
    return out;
}

double principal_eigenvalue(double ell, double d, const Kernel& k, double a_const, int n_cells) {
    if (!(ell > 0.0)) throw InvalidArgument("principal_eigenvalue: ell must be > 0");
    if (!(d > 0.0)) throw InvalidArgument("principal_eigenvalue: d must be > 0");
    if (n_cells < 2) throw InvalidArgument("principal_eigenvalue: n_cells must be >= 2");
    const UniformGrid grid(-ell, ell, n_cells);
    const std::size_t n = grid.size();
    const double h = grid.spacing();

    // Mass-corrected row: on coarse grids the raw lattice sum of a kinked
    // kernel exceeds its mass and would push the eigenvalue above a_const.
    ToeplitzConvolver conv(normalized_kernel_row(k, h, n));

    // W^{1/2} T W^{1/2} is symmetric and similar to the trapezoid operator T W.
    std::vector<double> sw(n, std::sqrt(h));
    sw.front() = sw.back() = std::sqrt(0.5 * h);

    std::vector<double> v(n);
    std::vector<double> tmp(n);
    std::vector<double> av(n);
    for (std::size_t j = 0; j < n; ++j) {
        v[j] = std::cos(0.5 * std::numbers::pi * grid.node(j) / ell) * sw[j] + 1e-3;
    }
    auto normalize = [](std::vector<double>& x) {
        double s = 0.0;
        for (double e : x) s += e * e;
        s = std::sqrt(s);
        for (double& e : x) e /= s;
    };
    normalize(v);

    constexpr int kMaxIter = 200000;
    double rho = 0.0;
    for (int it = 0; it < kMaxIter; ++it) {
        for (std::size_t j = 0; j < n; ++j) tmp[j] = sw[j] * v[j];
        conv.apply(tmp, av);
        for (std::size_t j = 0; j < n; ++j) av[j] *= sw[j];
        rho = 0.0;
        for (std::size_t j = 0; j < n; ++j) rho += v[j] * av[j];
        double res = 0.0;
        for (std::size_t j = 0; j < n; ++j) res += (av[j] - rho * v[j]) * (av[j] - rho * v[j]);
        v = av;
        normalize(v);
        if (std::sqrt(res) <= 1e-11 * std::max(rho, 1e-300)) return d * rho - d + a_const;
    }
    throw NonConvergence("principal_eigenvalue: power iteration stagnated at rho = " +
                         std::to_string(rho));
}

}  // namespace frontlab
