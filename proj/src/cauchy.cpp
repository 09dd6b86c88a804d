#include "frontlab/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frontlab/errors.hpp"

namespace frontlab {

std::optional<std::pair<double, double>> level_crossings(const CauchyState& s, double lambda) {
    const auto& u = s.u;
    const double dx = s.grid.spacing();
    std::size_t right = u.size();
    for (std::size_t i = u.size(); i-- > 0;) {
        if (u[i] >= lambda) {
            right = i;
            break;
        }
    }
    if (right == u.size()) return std::nullopt;
    std::size_t left = 0;
    while (u[left] < lambda) ++left;

    double x_plus = s.grid.node(right);
    if (right + 1 < u.size()) x_plus += (u[right] - lambda) / (u[right] - u[right + 1]) * dx;
    double x_minus = s.grid.node(left);
    if (left > 0) x_minus -= (u[left] - lambda) / (u[left] - u[left - 1]) * dx;
    return std::make_pair(x_minus, x_plus);
}

void CauchyConfig::validate() const {
    std::vector<std::string> bad;
    if (!(d > 0.0)) bad.push_back("d must be > 0");
    if (!(h0 > 0.0)) bad.push_back("h0 must be > 0");
    if (!(T > 0.0)) bad.push_back("T must be > 0");
    if (!(dx > 0.0 && dx < h0)) bad.push_back("dx must lie in (0, h0)");
    if (!(X >= 0.0)) bad.push_back("X must be >= 0");
    if (X > 0.0 && X < 2.0 * h0) bad.push_back("X must be at least 2 h0");
    if (!(sample_dt > 0.0)) bad.push_back("sample_dt must be > 0");
    if (!(snap_dt >= 0.0)) bad.push_back("snap_dt must be >= 0");
    for (double l : levels) {
        if (!(l > 0.0 && l < 1.0)) bad.push_back("levels must lie in (0, 1)");
    }
    if (!(boundary_eps > 0.0)) bad.push_back("boundary_eps must be > 0");
    if (dt && !(*dt > 0.0)) bad.push_back("dt must be > 0");
    if (!bad.empty()) {
        std::string msg = "CauchyConfig:";
        for (const auto& b : bad) msg += " " + b + ";";
        throw InvalidArgument(msg);
    }
}

double resolve_half_width(const CauchyConfig& cfg, const Kernel& k, const Reaction& r) {
    double X = cfg.X;
    if (X == 0.0) {
        const auto cls = k.tail_class();
        if (cls != TailClass::ThinTail && cls != TailClass::CompactSupport) {
            throw InvalidArgument("cauchy: kernel " + k.name() +
                                  " has no finite speed bound; set X explicitly");
        }
        const auto speed = linear_determinacy_speed(cfg.d, k, r);
        if (!speed) throw InvalidArgument("cauchy: no speed bound available; set X explicitly");
        X = 8.0 * cfg.T * *speed;
    }
    X = std::max(X, 2.0 * cfg.h0);
    return std::ceil(X / cfg.dx - 1e-9) * cfg.dx;
}

CauchyState cauchy_initial_state(double X, double dx, double h0, const InitialData& u0) {
    const auto half = static_cast<int>(std::lround(X / dx));
    if (half < 1) throw InvalidArgument("cauchy: X must exceed dx");
    CauchyState s;
    s.grid = UniformGrid(-static_cast<double>(half) * dx, static_cast<double>(half) * dx, 2 * half);
    s.u.resize(s.grid.size());
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        const double x = static_cast<double>(static_cast<int>(i) - half) * dx;
        s.u[i] = u0(x, h0);
    }
    return s;
}

struct CauchySolver::Impl {
    ToeplitzConvolver conv;
    std::vector<double> weights;
    std::vector<double> weighted;
    std::vector<double> convolved;
};

CauchySolver::CauchySolver(CauchyState s, double d, Kernel k, Reaction r, double M0star,
                           ConvolutionMethod method)
    : state_(std::move(s)), d_(d), reaction_(std::move(r)), M0star_(M0star) {
    if (!(d > 0.0)) throw InvalidArgument("CauchySolver: d must be > 0");
    const std::size_t n = state_.grid.size();
    if (state_.u.size() != n) throw InvalidArgument("CauchySolver: state does not match its grid");
    const double dx = state_.grid.spacing();
    offset_ = static_cast<std::ptrdiff_t>(std::lround(-state_.grid.left() / dx));
    std::vector<double> w(n, dx);
    w.front() = w.back() = 0.5 * dx;
    impl_ = std::make_unique<Impl>(Impl{ToeplitzConvolver(normalized_kernel_row(k, dx, n), method),
                                        std::move(w), std::vector<double>(n),
                                        std::vector<double>(n)});
    boundary_max_ = std::max(state_.u.front(), state_.u.back());
}

CauchySolver::~CauchySolver() = default;
CauchySolver::CauchySolver(CauchySolver&&) noexcept = default;
CauchySolver& CauchySolver::operator=(CauchySolver&&) noexcept = default;

double CauchySolver::at_node(std::ptrdiff_t j) const {
    const std::ptrdiff_t idx = j + offset_;
    if (idx < 0 || idx >= static_cast<std::ptrdiff_t>(state_.u.size())) return 0.0;
    return state_.u[static_cast<std::size_t>(idx)];
}

void CauchySolver::step(double dt) {
    if (!(dt > 0.0)) throw InvalidArgument("cauchy_step: dt must be > 0");
    if (dt * (d_ + reaction_.effective_lipschitz()) > 1.0 + 1e-12) {
        throw StepRejected("cauchy_step: dt exceeds the positivity bound 1 / (d + K)");
    }
    auto& u = state_.u;
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i) impl_->weighted[i] = impl_->weights[i] * u[i];
    impl_->conv.apply(impl_->weighted, impl_->convolved);
    for (std::size_t i = 0; i < n; ++i) {
        double next = u[i] + dt * (d_ * impl_->convolved[i] - d_ * u[i] + reaction_(u[i]));
        if (next < 0.0) {
            next = 0.0;
            ++clamps_;
        } else if (next > M0star_) {
            if (next > M0star_ * (1.0 + 1e-12)) ++clamps_;
            next = M0star_;
        }
        u[i] = next;
    }
    state_.t += dt;
    boundary_max_ = std::max({boundary_max_, u.front(), u.back()});
}

CauchyState cauchy_step(const CauchyState& s, double dt, double d, const Kernel& k, const Reaction& r) {
    double m0 = r.cap_K0();
    for (double v : s.u) m0 = std::max(m0, v);
    CauchySolver solver(s, d, k, r, m0);
    solver.step(dt);
    return solver.state();
}

CauchyResult cauchy_simulate(const CauchyConfig& cfg, const Kernel& k, const Reaction& r) {
    cfg.validate();
    const double X = resolve_half_width(cfg, k, r);
    const double m0 = std::max(cfg.u0.amplitude, r.cap_K0());
    // FFT round-off leaves an absolute noise floor near 1e-16 ahead of the
    // front, which a pulled front amplifies like e^{f'(0) t}. Exponentially
    // thin tails therefore get the direct sum, which is accurate relative to
    // the tiny values there.
    ConvolutionMethod method = cfg.convolution;
    if (method == ConvolutionMethod::Auto) {
        const auto cls = k.tail_class();
        method = (cls == TailClass::ThinTail || cls == TailClass::CompactSupport)
                     ? ConvolutionMethod::Direct
                     : ConvolutionMethod::Fft;
    }
    CauchySolver solver(cauchy_initial_state(X, cfg.dx, cfg.h0, cfg.u0), cfg.d, k, r, m0, method);

    CauchyResult res;
    for (double l : cfg.levels) res.tracks.push_back(LevelSetTrack{l, {}, {}, {}});
    const auto n_samples = static_cast<long>(std::llround(cfg.T / cfg.sample_dt));
    if (n_samples < 1) throw InvalidArgument("cauchy: T must be at least sample_dt");
    const long snap_every =
        cfg.snap_dt > 0.0 ? std::max(1L, std::lround(cfg.snap_dt / cfg.sample_dt)) : 0;

    auto record = [&](long sample) {
        const CauchyState& s = solver.state();
        for (auto& tr : res.tracks) {
            if (auto c = level_crossings(s, tr.lambda)) {
                tr.t.push_back(s.t);
                tr.x_minus.push_back(c->first);
                tr.x_plus.push_back(c->second);
            }
        }
        if (snap_every > 0 && sample % snap_every == 0) {
            std::vector<double> xs(s.u.size());
            for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = s.grid.node(i);
            res.snapshots.push_back({s.t, std::move(xs), s.u});
        }
    };

    const double dt_rule = cfg.dt.value_or(0.2 / (cfg.d + r.effective_lipschitz()));
    const long per_sample = std::max(1L, static_cast<long>(std::ceil(cfg.sample_dt / dt_rule - 1e-9)));
    res.dt = cfg.sample_dt / static_cast<double>(per_sample);
    record(0);
    for (long sample = 1; sample <= n_samples; ++sample) {
        for (long j = 0; j < per_sample; ++j) {
            solver.step(res.dt);
            ++res.steps;
        }
        record(sample);
    }
    res.final_state = solver.state();
    res.boundary_max = solver.boundary_max();
    res.domain_too_small = res.boundary_max > cfg.boundary_eps;
    res.clamp_count = solver.clamp_count();
    return res;
}

MuLimitReport compare_mu_limit(const std::vector<double>& mus, const MuLimitConfig& cfg,
                               const Kernel& k, const Reaction& r) {
    if (mus.empty()) throw InvalidArgument("compare_mu_limit: no mu values");
    for (double mu : mus) {
        if (!(mu > 0.0)) throw InvalidArgument("compare_mu_limit: every mu must be > 0");
    }
    const SimConfig& base = cfg.base;
    base.validate();
    if (!(cfg.window > 0.0)) throw InvalidArgument("compare_mu_limit: window must be > 0");

    CauchyConfig cc;
    cc.d = base.d;
    cc.h0 = base.h0;
    cc.T = base.T;
    cc.dx = base.dx;
    cc.X = cfg.X;
    cc.u0 = base.u0;
    cc.validate();
    const double X = resolve_half_width(cc, k, r);
    if (cfg.window > X) throw InvalidArgument("compare_mu_limit: window exceeds the whole-line grid");

    // One dt for all runs so that the comparison is step for step.
    double dt = 0.2 / (base.d + r.effective_lipschitz());
    if (cfg.dt) {
        dt = *cfg.dt;
    } else {
        for (double mu : mus) {
            SimConfig sc = base;
            sc.mu = mu;
            if (auto rule = default_time_step(sc, k, r)) dt = std::min(dt, *rule);
        }
    }
    const auto steps = static_cast<long>(std::ceil(base.T / dt - 1e-9));
    dt = base.T / static_cast<double>(steps);

    const double m0 = std::max(base.u0.amplitude, r.cap_K0());
    CauchySolver whole(cauchy_initial_state(X, base.dx, base.h0, base.u0), base.d, k, r, m0,
                       base.convolution);
    std::vector<FreeBoundarySolver> fronts;
    for (double mu : mus) {
        fronts.emplace_back(initial_state(base.h0, base.dx, base.u0), base.d, mu, k, r, m0,
                            base.convolution);
    }

    MuLimitReport rep;
    rep.dt = dt;
    rep.steps = steps;
    rep.X = X;
    for (double mu : mus) rep.entries.push_back({mu, 0.0, 0.0, 0.0, 0.0});
    const auto jw = static_cast<std::ptrdiff_t>(std::floor(cfg.window / base.dx + 1e-9));
    auto compare = [&] {
        for (std::size_t m = 0; m < fronts.size(); ++m) {
            const FieldState& s = fronts[m].state();
            MuLimitEntry& e = rep.entries[m];
            for (std::ptrdiff_t j = -jw; j <= jw; ++j) {
                const double diff = s.at_node(j) - whole.at_node(j);
                e.excess = std::max(e.excess, diff);
                e.abs_diff = std::max(e.abs_diff, std::abs(diff));
            }
        }
    };
    compare();
    for (long n = 0; n < steps; ++n) {
        whole.step(dt);
        for (auto& f : fronts) f.step(dt);
        compare();
    }
    for (std::size_t m = 0; m < fronts.size(); ++m) {
        rep.entries[m].g_T = fronts[m].state().g;
        rep.entries[m].h_T = fronts[m].state().h;
    }
    rep.domain_too_small = whole.boundary_max() > cc.boundary_eps;
    return rep;
}

}  // namespace frontlab
