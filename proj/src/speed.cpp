#include "frontlab/speed.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "frontlab/errors.hpp"
#include "frontlab/numerics.hpp"

namespace frontlab {

double flux_M(const SemiWaveProfile& p, const Kernel& k, double mu) {
    if (k.tail_class() == TailClass::FatTail) {
        throw DivergentIntegral("flux_M: kernel " + k.name() + " has a non-integrable tail mass");
    }
    const std::size_t n = p.phi.size();
    if (n != p.grid.size()) throw InvalidArgument("flux_M: profile does not match its grid");
    std::vector<double> integrand(n);
    for (std::size_t j = 0; j < n; ++j) integrand[j] = k.tail_mass(p.grid.node(j)) * p.phi[j];
    const double far = p.plateau_level * k.tail_integral(p.grid.left());
    return mu * (trapezoid(integrand, p.grid) + far);
}

namespace {

// G(c) = c - M(c) with accepted profiles cached by speed. A profile at a
// smaller speed lies above the one sought, so it is a valid warm start.
class SpeedFunction {
public:
    SpeedFunction(double mu, double d, const Kernel& k, const Reaction& r,
                  const SemiWaveParams& params)
        : mu_(mu), kernel_(k), problem_(d, k, r, params) {}

    double operator()(double c) {
        if (auto v = values_.find(c); v != values_.end()) return v->second;
        const double g = evaluate(c);
        values_[c] = g;
        return g;
    }

    bool rejected(double c) const { return rejected_.count(c) > 0; }
    const SemiWaveProfile* profile(double c) const {
        auto it = profiles_.find(c);
        return it == profiles_.end() ? nullptr : &it->second;
    }
    int evaluations() const { return evaluations_; }

private:
    double evaluate(double c) {
        ++evaluations_;
        std::optional<std::span<const double>> start;
        auto it = profiles_.lower_bound(c);
        if (it != profiles_.begin()) start = std::span<const double>(std::prev(it)->second.phi);
        SemiWaveResult res = problem_.solve(c, start);
        if (!res.accepted()) {
            rejected_.insert(c);
            return c;
        }
        const double g = c - flux_M(res.profile, kernel_, mu_);
        profiles_[c] = std::move(res.profile);
        return g;
    }

    double mu_;
    Kernel kernel_;
    SemiWaveProblem problem_;
    std::map<double, SemiWaveProfile> profiles_;
    std::map<double, double> values_;
    std::set<double> rejected_;
    int evaluations_ = 0;
};

}  // namespace

SpeedSolution solve_c0(double mu, double d, const Kernel& k, const Reaction& r,
                       const SemiWaveParams& params, double tol) {
    if (!(mu > 0.0)) throw InvalidArgument("solve_c0: mu must be > 0");
    if (!(tol > 0.0)) throw InvalidArgument("solve_c0: tol must be > 0");
    if (k.tail_class() == TailClass::FatTail) {
        throw NoFiniteSpeed("solve_c0: kernel " + k.name() +
                            " violates the integrability condition; fronts accelerate");
    }
    const double cap = mu * c_of_J(k);

    SemiWaveParams p = params;
    const double max_L = 16.0 * params.L;
    int total_evaluations = 0;
    while (true) {
        SpeedFunction G(mu, d, k, r, p);
        double lo = std::min(0.1, cap / 10.0);
        double g_lo = G(lo);
        for (int shrink = 0; g_lo >= 0.0; ++shrink) {
            if (shrink == 40) throw BracketError("solve_c0: G stays nonnegative near c = 0");
            lo *= 0.25;
            g_lo = G(lo);
        }
        double hi = lo;
        double g_hi = g_lo;
        while (g_hi <= 0.0) {
            lo = hi;
            hi = std::min(2.0 * hi, cap);
            g_hi = G(hi);
            if (hi == cap && g_hi <= 0.0) {
                throw NonConvergence("solve_c0: G(mu c(J)) <= 0, flux exceeds its bound");
            }
        }

        const BisectionResult b =
            bisect_bracket(std::ref(G), lo, hi, tol, 1e-13 * std::max(1.0, hi));
        double c0 = b.root;
        double g0 = G(c0);
        if (!G.profile(c0) || std::abs(g0) > tol) {
            // Fall back to the best accepted endpoint.
            if (G.profile(b.lo) && (!G.profile(c0) || std::abs(G(b.lo)) < std::abs(g0))) {
                c0 = b.lo;
                g0 = G(c0);
            }
        }
        total_evaluations += G.evaluations();

        const bool on_edge = G.rejected(b.hi) && std::abs(g0) > tol;
        if (on_edge && 2.0 * p.L <= max_L) {
            // The root hides behind the acceptance edge of a too shallow domain.
            const double h = p.L / p.n_cells;
            p.L *= 2.0;
            p.n_cells = static_cast<int>(std::lround(p.L / h));
            continue;
        }
        const SemiWaveProfile* prof = G.profile(c0);
        if (!prof) {
            std::ostringstream os;
            os << "solve_c0: no accepted profile near the root c = " << c0 << " (L = " << p.L << ")";
            throw NonConvergence(os.str());
        }
        SpeedSolution s;
        s.c0 = c0;
        s.mu = mu;
        s.residual = std::abs(g0);
        s.bracket = {b.lo, b.hi};
        s.profile = *prof;
        s.evaluations = total_evaluations;
        return s;
    }
}

std::vector<SpeedCurveEntry> c0_curve(const std::vector<double>& mus, double d, const Kernel& k,
                                      const Reaction& r, const SemiWaveParams& params, double tol,
                                      int threads) {
    for (std::size_t i = 0; i < mus.size(); ++i) {
        if (!(mus[i] > 0.0)) throw InvalidArgument("c0_curve: every mu must be > 0");
        if (i > 0 && !(mus[i] > mus[i - 1])) {
            throw InvalidArgument("c0_curve: mus must be strictly increasing");
        }
    }
    std::vector<SpeedCurveEntry> out(mus.size());
    auto run = [&](std::size_t i) {
        out[i].mu = mus[i];
        try {
            out[i].solution = solve_c0(mus[i], d, k, r, params, tol);
        } catch (const std::exception& e) {
            out[i].error = e.what();
        }
    };
    const std::size_t workers =
        std::min<std::size_t>(mus.size(), static_cast<std::size_t>(std::max(threads, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < mus.size(); ++i) run(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < mus.size(); i = next++) run(i);
        });
    }
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace frontlab
