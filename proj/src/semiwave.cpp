#include "frontlab/semiwave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "frontlab/errors.hpp"

namespace frontlab {

namespace {

// Increase between iterates attributable to FFT round-off.
constexpr double kRoundoff = 1e-10;

std::vector<double> kernel_row(const Kernel& k, const UniformGrid& g) {
    std::vector<double> row(g.size());
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = k.density(static_cast<double>(j) * g.spacing());
    return row;
}

}  // namespace

void SemiWaveParams::validate() const {
    if (!(L > 0.0)) throw InvalidArgument("SemiWaveParams: L must be > 0");
    if (n_cells < 100) throw InvalidArgument("SemiWaveParams: n_cells must be >= 100");
    if (!(tol_iter > 0.0)) throw InvalidArgument("SemiWaveParams: tol_iter must be > 0");
    if (max_iters < 1) throw InvalidArgument("SemiWaveParams: max_iters must be >= 1");
    if (!(plateau_eps > 0.0 && plateau_eps < 0.1)) {
        throw InvalidArgument("SemiWaveParams: plateau_eps must lie in (0, 0.1)");
    }
    if (!(sigma_homotopy >= 0.0 && sigma_homotopy < 1.0)) {
        throw InvalidArgument("SemiWaveParams: sigma_homotopy must lie in [0, 1)");
    }
}

SemiWaveParams default_semiwave_params(const Kernel& k) {
    SemiWaveParams p;
    switch (k.tail_class()) {
        case TailClass::ThinTail:
            break;
        case TailClass::CompactSupport: {
            const double support = k.support_radius().value_or(10.0);
            p.L = std::max(40.0, 2.0 * support);
            if (p.L > 40.0) p.n_cells = std::max(4000, static_cast<int>(std::ceil(p.L / 0.05)));
            break;
        }
        case TailClass::HeavyTailJ1Only:
        case TailClass::FatTail:
            p.L = 400.0;
            p.n_cells = 4000;
            break;
    }
    return p;
}

SemiWaveParams default_cstar_params(const Kernel& k) {
    SemiWaveParams p = default_semiwave_params(k);
    p.L *= 2.5;
    p.n_cells = static_cast<int>(std::ceil(p.L / 0.05));
    p.max_iters = 40000;
    return p;
}

MConstant choose_M(double c, double d, const Reaction& r) {
    if (!(c > 0.0)) throw InvalidArgument("choose_M: c must be > 0");
    if (!(d > 0.0)) throw InvalidArgument("choose_M: d must be > 0");
    return {(d + r.effective_lipschitz()) / c};
}

double plateau_level(double d, const Kernel& k, const Reaction& r) {
    const double mass = k.total_mass();
    if (mass >= 1.0 - 1e-15) return 1.0;
    return adjust_for_truncation(r, mass, d).eta_n;
}

SemiWaveProblem::SemiWaveProblem(double d, Kernel k, Reaction r, SemiWaveParams params)
    : d_(d),
      kernel_(std::move(k)),
      reaction_(std::move(r)),
      params_(params),
      grid_((params.validate(), -params.L), 0.0, params.n_cells),
      plateau_(0.0),
      conv_(kernel_row(kernel_, grid_), params.convolution) {
    if (!(d > 0.0)) throw InvalidArgument("SemiWaveProblem: d must be > 0");
    if (!kernel_.has_tail_mass()) {
        throw UnsupportedTail("SemiWaveProblem: kernel '" + kernel_.name() +
                              "' has no tail mass; truncate it first");
    }
    plateau_ = frontlab::plateau_level(d_, kernel_, reaction_);
    const std::size_t n = grid_.size();
    const double h = grid_.spacing();
    weights_.assign(n, h);
    weights_.front() = weights_.back() = 0.5 * h;
    far_field_.resize(n);
    tail_at_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid_.node(i);
        far_field_[i] = kernel_.tail_mass(-x - params_.L);
        tail_at_[i] = kernel_.tail_mass(x);
    }
    scratch_ = weights_;
    mass_defect_.resize(n);
    conv_.apply(scratch_, mass_defect_);
    const double mass = kernel_.total_mass();
    for (std::size_t i = 0; i < n; ++i) {
        mass_defect_[i] = (mass - tail_at_[i] - far_field_[i]) - mass_defect_[i];
    }
}

std::vector<double> SemiWaveProblem::inner(std::span<const double> phi) {
    const std::size_t n = grid_.size();
    if (phi.size() != n) throw InvalidArgument("SemiWaveProblem: profile length mismatch");
    for (std::size_t j = 0; j < n; ++j) scratch_[j] = weights_[j] * phi[j];
    std::vector<double> out(n);
    conv_.apply(scratch_, out);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] += mass_defect_[i] * phi[i] + plateau_ * far_field_[i];
    }
    return out;
}

SemiWaveProblem::Scheme SemiWaveProblem::scheme(double c, double M) const {
    const double h = grid_.spacing();
    const double mh = M * h;
    if (mh <= 1.0) {
        const double denom = 1.0 + 0.5 * mh;
        const double w = h / (2.0 * c * denom);
        return {(1.0 - 0.5 * mh) / denom, w, w};
    }
    // Exact integration of e^{-M s} against the linear interpolant of F.
    const double rho = std::exp(-mh);
    const double i0 = -std::expm1(-mh) / M;
    const double i1 = (i0 - h * rho) / M;
    return {rho, (i0 - i1 / h) / c, (i1 / h) / c};
}

std::vector<double> SemiWaveProblem::source(std::span<const double> phi, double c, double M,
                                            double sigma) {
    std::vector<double> F = inner(phi);
    const double shift = c * M - d_;
    for (std::size_t i = 0; i < F.size(); ++i) {
        F[i] = d_ * F[i] + d_ * sigma * tail_at_[i] + shift * phi[i] + reaction_(phi[i]);
    }
    return F;
}

std::vector<double> SemiWaveProblem::apply_A(std::span<const double> phi, double c, MConstant M,
                                             double sigma) {
    if (!(c > 0.0)) throw InvalidArgument("apply_A: c must be > 0");
    const std::vector<double> F = source(phi, c, M.M, sigma);
    const Scheme s = scheme(c, M.M);
    const std::size_t n = grid_.size();
    std::vector<double> out(n);
    out[n - 1] = sigma;
    for (std::size_t i = n - 1; i-- > 0;) {
        out[i] = s.rho * out[i + 1] + s.alpha * F[i] + s.beta * F[i + 1];
    }
    return out;
}

double SemiWaveProblem::residual(std::span<const double> phi, double c, double sigma) {
    const double M = choose_M(c, d_, reaction_).M;
    const std::vector<double> F = source(phi, c, M, sigma);
    const Scheme s = scheme(c, M);
    const double scale = 1.0 / (s.alpha + s.beta);
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < phi.size(); ++i) {
        const double defect = phi[i] - s.rho * phi[i + 1] - s.alpha * F[i] - s.beta * F[i + 1];
        worst = std::max(worst, std::abs(defect) * scale);
    }
    return worst;
}

SemiWaveResult SemiWaveProblem::solve(double c, std::optional<std::span<const double>> start) {
    if (!(c > 0.0)) throw InvalidArgument("solve_semiwave: c must be > 0");
    const double sigma = params_.sigma_homotopy;
    const MConstant M = choose_M(c, d_, reaction_);
    const std::size_t n = grid_.size();

    std::vector<double> phi;
    if (start) {
        if (start->size() != n) throw InvalidArgument("solve_semiwave: start length mismatch");
        phi.assign(start->begin(), start->end());
        for (double& v : phi) v = std::clamp(v, 0.0, plateau_);
    } else {
        phi.assign(n, plateau_);
    }
    phi[n - 1] = sigma;

    SemiWaveResult result{SemiWaveStatus::NonExistence,
                          SemiWaveProfile{grid_, {}, c, 0, 0.0, 0.0, plateau_, sigma, 0.0},
                          ""};
    double violation = 0.0;
    const double reject_below = plateau_ - params_.plateau_eps;
    for (int it = 1; it <= params_.max_iters; ++it) {
        std::vector<double> next = apply_A(phi, c, M, sigma);
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            diff = std::max(diff, std::abs(next[i] - phi[i]));
            violation = std::max(violation, next[i] - phi[i]);
        }
        phi = std::move(next);
        result.profile.iterations_used = it;

        // Iterates only decrease from an upper solution, so a collapsed
        // plateau cannot recover.
        if (violation <= kRoundoff && phi.front() < reject_below) {
            std::ostringstream os;
            os << "plateau collapsed to " << phi.front() << " < " << reject_below
               << " after " << it << " iterations";
            result.diagnostics = os.str();
            break;
        }
        if (diff < params_.tol_iter) {
            result.diagnostics = "converged";
            break;
        }
        if (it == params_.max_iters) {
            std::ostringstream os;
            os << "solve_semiwave: no convergence at c=" << c << " after " << it
               << " iterations (last change " << diff << ")";
            throw NonConvergence(os.str());
        }
    }

    result.profile.monotone_violation = std::max(violation, 0.0);
    result.profile.plateau_value = phi.front();
    result.profile.residual = residual(phi, c, sigma);
    result.profile.phi = std::move(phi);

    if (result.diagnostics == "converged") {
        const bool plateau_ok = result.profile.plateau_value >= reject_below;
        const bool residual_ok = result.profile.residual < 100.0 * params_.tol_iter;
        if (plateau_ok && residual_ok) {
            result.status = SemiWaveStatus::Accepted;
        } else {
            std::ostringstream os;
            os << "converged but rejected: plateau " << result.profile.plateau_value
               << (plateau_ok ? " ok" : " too low") << ", residual " << result.profile.residual
               << (residual_ok ? " ok" : " too large");
            result.diagnostics = os.str();
        }
    }
    return result;
}

std::vector<double> apply_A(std::span<const double> phi, double c, double d, const Kernel& k,
                            const Reaction& r, MConstant M, double sigma,
                            const SemiWaveParams& params) {
    SemiWaveProblem problem(d, k, r, params);
    return problem.apply_A(phi, c, M, sigma);
}

SemiWaveResult solve_semiwave(double c, double d, const Kernel& k, const Reaction& r,
                              const SemiWaveParams& params) {
    SemiWaveProblem problem(d, k, r, params);
    return problem.solve(c);
}

HalfLevelShift half_level_shift(const SemiWaveProfile& p) {
    const auto& phi = p.phi;
    if (phi.empty() || p.plateau_value < 0.5) {
        throw NoCrossing("half_level_shift: plateau " + std::to_string(p.plateau_value) + " < 1/2");
    }
    // Walk left from the free boundary to the first node at or above 1/2.
    std::size_t i = phi.size() - 1;
    while (i > 0 && phi[i] < 0.5) --i;
    double x_half = p.grid.node(i);
    if (phi[i] > 0.5 && i + 1 < phi.size()) {
        const double t = (phi[i] - 0.5) / (phi[i] - phi[i + 1]);
        x_half = p.grid.node(i) + t * p.grid.spacing();
    }
    const double l = -x_half;
    HalfLevelShift out{l, p};
    out.shifted.grid = UniformGrid(p.grid.left() + l, p.grid.right() + l, p.grid.n_cells());
    return out;
}

double front_slope(const SemiWaveProfile& p, double d, const Kernel& k) {
    const std::size_t n = p.phi.size();
    std::vector<double> integrand(n);
    for (std::size_t j = 0; j < n; ++j) integrand[j] = k.density(-p.grid.node(j)) * p.phi[j];
    const double far = p.plateau_level * k.tail_mass(p.grid.left());
    return -(d / p.c) * (trapezoid(integrand, p.grid) + far);
}

std::optional<double> linear_determinacy_speed(double d, const Kernel& k, const Reaction& r) {
    // Largest lambda with a finite moment, searched on a doubling ladder.
    double lambda_hi = 0.0;
    for (double lam = 1.0 / 64.0; lam <= 64.0; lam *= 2.0) {
        if (!std::isfinite(exp_moment(k, lam))) break;
        lambda_hi = lam;
    }
    if (lambda_hi == 0.0) return std::nullopt;
    if (std::isfinite(exp_moment(k, 2.0 * lambda_hi))) {
        lambda_hi *= 2.0;
    } else {
        // Refine the divergence edge between lambda_hi and 2 lambda_hi.
        double lo = lambda_hi;
        double hi = 2.0 * lambda_hi;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (std::isfinite(exp_moment(k, mid)) ? lo : hi) = mid;
        }
        lambda_hi = lo;
    }
    auto objective = [&](double lam) {
        const double m = exp_moment(k, lam);
        if (!std::isfinite(m)) return std::numeric_limits<double>::max();
        return (d * (m - 1.0) + r.df0()) / lam;
    };
    const ScalarMinimum best = minimize_scalar(objective, 1e-6, lambda_hi, 1e-9);
    return best.min;
}

CStarEstimate estimate_cstar(double d, const Kernel& k, const Reaction& r,
                             const SemiWaveParams& params, double tol_c) {
    const TailClass cls = k.tail_class();
    if (cls != TailClass::ThinTail && cls != TailClass::CompactSupport) {
        throw UnsupportedTail("estimate_cstar: kernel " + k.name() + " (" + to_string(cls) +
                              ") admits no traveling wave, so c_* is not finite");
    }
    if (!(tol_c > 0.0)) throw InvalidArgument("estimate_cstar: tol_c must be > 0");

    SemiWaveProblem problem(d, k, r, params);
    std::vector<double> warm;
    // Near the threshold the iteration slows down without bound; a speed whose
    // profile cannot be confirmed within max_iters counts as rejected.
    auto accepts = [&](double c) {
        try {
            const SemiWaveResult res =
                warm.empty() ? problem.solve(c) : problem.solve(c, std::span<const double>(warm));
            if (res.accepted()) warm = res.profile.phi;
            return res.accepted();
        } catch (const NonConvergence&) {
            return false;
        }
    };

    CStarEstimate est;
    double lo = 0.1;
    double hi = 1.0;
    if (!accepts(lo)) {
        throw NonConvergence("estimate_cstar: no semi-wave even at c = 0.1");
    }
    while (accepts(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) throw NonConvergence("estimate_cstar: existence region unbounded");
    }
    while (hi - lo > tol_c) {
        const double mid = 0.5 * (lo + hi);
        (accepts(mid) ? lo : hi) = mid;
    }
    est.lo = lo;
    est.hi = hi;
    est.c_star = 0.5 * (lo + hi);
    est.c_linear = linear_determinacy_speed(d, k, r);
    if (est.c_linear) {
        const double rel = std::abs(est.c_star - *est.c_linear) / *est.c_linear;
        est.disagreement_warning = rel > 0.05;
        std::ostringstream os;
        os << "existence threshold " << est.c_star << ", linear determinacy " << *est.c_linear
           << " (relative gap " << rel << ")";
        est.diagnostics = os.str();
    }
    return est;
}

}  // namespace frontlab
