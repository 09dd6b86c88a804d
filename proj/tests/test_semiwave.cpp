#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "frontlab/errors.hpp"
#include "frontlab/numerics.hpp"
#include "frontlab/semiwave.hpp"
#include "oracles.hpp"

using namespace frontlab;

namespace {

const Kernel kLaplace = make_laplace();
const Reaction kLogistic = make_logistic();

SemiWaveProfile accepted(double c, double d = 1.0, const SemiWaveParams& p = default_semiwave_params(kLaplace)) {
    const auto res = solve_semiwave(c, d, kLaplace, kLogistic, p);
    if (!res.accepted()) throw std::runtime_error("profile rejected at c = " + std::to_string(c));
    return res.profile;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST(ChooseM, Examples) {
    EXPECT_NEAR(choose_M(1.0, 1.0, kLogistic).M, 2.1, 1e-14);
    EXPECT_NEAR(choose_M(2.0, 1.0, kLogistic).M, 1.05, 1e-14);
    EXPECT_NEAR(choose_M(0.8, 1.3, kLogistic).M, 2.0 * choose_M(1.6, 1.3, kLogistic).M, 1e-14);
    EXPECT_THROW(choose_M(0.0, 1.0, kLogistic), InvalidArgument);
    // The shifted reaction (cM - d) u + f(u) is nondecreasing on [0, 1].
    for (double c : {0.1, 1.0, 3.0}) {
        const double M = choose_M(c, 1.0, kLogistic).M;
        double prev = 0.0;
        for (double u = 0.0; u <= 1.0; u += 1e-3) {
            const double v = (c * M - 1.0) * u + kLogistic(u);
            EXPECT_GE(v, prev - 1e-15);
            prev = v;
        }
    }
}

TEST(SemiWaveParams, Validation) {
    SemiWaveParams p;
    EXPECT_NO_THROW(p.validate());
    p.n_cells = 50;
    EXPECT_THROW(p.validate(), InvalidArgument);
    p = {};
    p.plateau_eps = 0.2;
    EXPECT_THROW(p.validate(), InvalidArgument);
    p = {};
    p.L = -1.0;
    EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(ApplyA, UpperSolutionMapsBelowOne) {
    const auto p = default_semiwave_params(kLaplace);
    const std::vector<double> one(p.n_cells + 1, 1.0);
    for (double sigma : {0.0, 0.5}) {
        for (double c : {0.3, 1.0, 2.0}) {
            const auto a = apply_A(one, c, 1.0, kLaplace, kLogistic, choose_M(c, 1.0, kLogistic), sigma, p);
            EXPECT_NEAR(a.back(), sigma, 1e-15);
            // Deep in the plateau the deficit is below double resolution.
            for (std::size_t i = 0; i + 1 < a.size(); ++i) {
                ASSERT_LE(a[i], 1.0) << "c=" << c << " i=" << i;
                if (a[i] < 1.0 - 1e-15 || i + 1 == a.size() - 1) continue;
                ASSERT_LT(i, static_cast<std::size_t>(p.n_cells / 2)) << "c=" << c << " i=" << i;
            }
        }
    }
}

TEST(ApplyA, Monotone) {
    const auto p = default_semiwave_params(kLaplace);
    const std::size_t n = p.n_cells + 1;
    const UniformGrid g(-p.L, 0.0, p.n_cells);
    std::vector<double> lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = g.node(i);
        lo[i] = 0.8 * (1.0 - std::exp(0.7 * x));
        hi[i] = std::min(1.0, lo[i] + 0.1 * std::abs(std::sin(x)));
    }
    const double c = 1.2;
    const MConstant M = choose_M(c, 1.0, kLogistic);
    const auto a = apply_A(lo, c, 1.0, kLaplace, kLogistic, M, 0.0, p);
    const auto b = apply_A(hi, c, 1.0, kLaplace, kLogistic, M, 0.0, p);
    for (std::size_t i = 0; i < n; ++i) ASSERT_LE(a[i], b[i] + 1e-15) << i;
}

TEST(ApplyA, ZeroProfileIsFarFieldIntegral) {
    const auto p = default_semiwave_params(kLaplace);
    const double c = 1.0, d = 1.0;
    const double M = choose_M(c, d, kLogistic).M;
    const std::vector<double> zero(p.n_cells + 1, 0.0);
    const auto a = apply_A(zero, c, d, kLaplace, kLogistic, {M}, 0.0, p);
    const UniformGrid g(-p.L, 0.0, p.n_cells);
    for (std::size_t i : {0u, 1000u, 3000u, 3900u, 3999u}) {
        const double x = g.node(i);
        // (e^{Mx}/c) int_x^0 e^{-M xi} d a(-xi - L) d xi, by Gauss-Legendre.
        const double ref = std::exp(M * x) / c *
                           gauss_legendre_composite(
                               [&](double xi) { return std::exp(-M * xi) * d * kLaplace.tail_mass(-xi - p.L); }, x, 0.0,
                               200);
        EXPECT_GT(a[i], 0.0);
        // Trapezoid outer rule: relative error of order (M + 1)^2 h^2 / 12.
        EXPECT_NEAR(a[i], ref, 1e-4 * ref) << "x=" << x;
    }
}

TEST(SolveSemiWave, LaplaceAtUnitSpeed) {
    const auto p = default_semiwave_params(kLaplace);
    const auto res = solve_semiwave(1.0, 1.0, kLaplace, kLogistic, p);
    ASSERT_TRUE(res.accepted()) << res.diagnostics;
    const auto& prof = res.profile;
    EXPECT_EQ(prof.phi.back(), 0.0);
    EXPECT_LT(prof.residual, 1e-6);
    EXPECT_GE(prof.plateau_value, 1.0 - p.plateau_eps);
    EXPECT_LE(prof.monotone_violation, 1e-14);
    for (std::size_t i = 0; i + 1 < prof.phi.size(); ++i) {
        ASSERT_GE(prof.phi[i], 0.0);
        ASSERT_LE(prof.phi[i], 1.0);
        ASSERT_LT(prof.phi[i + 1] - prof.phi[i], p.tol_iter);
        if (prof.phi[i] > 1e-6) { ASSERT_LT(prof.phi[i + 1], prof.phi[i]) << i; }
    }
}

TEST(SolveSemiWave, AboveMinimalSpeedHasNoProfile) {
    const auto res = solve_semiwave(3.0, 1.0, kLaplace, kLogistic, default_semiwave_params(kLaplace));
    EXPECT_FALSE(res.accepted());
    EXPECT_LT(res.profile.plateau_value, 0.99);
    EXPECT_THROW(solve_semiwave(0.0, 1.0, kLaplace, kLogistic, default_semiwave_params(kLaplace)), InvalidArgument);
}

TEST(SolveSemiWave, AgreesWithOdeOracle) {
    const auto p = default_semiwave_params(kLaplace);
    const auto prof = accepted(1.0);
    const auto ode = oracle::picard_ode_semiwave(1.0, 1.0, kLaplace, kLogistic, p.L, p.n_cells);
    ASSERT_LT(ode.last_change, 1e-10);
    EXPECT_LT(sup_diff(prof.phi, ode.phi), 1e-4);
}

TEST(SolveSemiWave, IterationCapRaisesNonConvergence) {
    auto p = default_semiwave_params(kLaplace);
    p.max_iters = 3;
    EXPECT_THROW(solve_semiwave(1.0, 1.0, kLaplace, kLogistic, p), NonConvergence);
}

TEST(SemiWaveProperties, DecreasingInSpeed) {
    std::vector<double> prev;
    for (double c : {0.5, 1.0, 1.5, 2.0}) {
        const auto prof = accepted(c);
        if (!prev.empty()) {
            for (std::size_t i = 0; i < prev.size(); ++i) ASSERT_GE(prev[i], prof.phi[i] - 1e-10) << c;
        }
        prev = prof.phi;
    }
}

TEST(SemiWaveProperties, NondecreasingInSigma) {
    std::vector<double> prev;
    for (double sigma : {0.0, 0.05, 0.1, 0.2}) {
        auto p = default_semiwave_params(kLaplace);
        p.sigma_homotopy = sigma;
        const auto res = solve_semiwave(1.0, 1.0, kLaplace, kLogistic, p);
        ASSERT_TRUE(res.accepted());
        EXPECT_NEAR(res.profile.phi.back(), sigma, 1e-15);
        if (!prev.empty()) {
            for (std::size_t i = 0; i < prev.size(); ++i) ASSERT_LE(prev[i], res.profile.phi[i] + 1e-10) << sigma;
        }
        prev = res.profile.phi;
    }
}

TEST(SemiWaveProperties, UniqueFromTwoStarts) {
    const auto p = default_semiwave_params(kLaplace);
    SemiWaveProblem prob(1.0, kLaplace, kLogistic, p);
    const auto first = prob.solve(1.0);
    ASSERT_TRUE(first.accepted());
    std::vector<double> start(first.profile.phi);
    for (double& v : start) v = std::min(1.0, v + 0.1);
    start.back() = 0.0;
    const auto second = prob.solve(1.0, std::span<const double>(start));
    ASSERT_TRUE(second.accepted());
    EXPECT_LT(sup_diff(first.profile.phi, second.profile.phi), 10 * p.tol_iter);
}

TEST(SemiWaveProperties, FlattensTowardMinimalSpeed) {
    double prev = 2.0;
    for (double c : {1.0, 1.5, 2.0, 2.3}) {
        const auto prof = accepted(c);
        double sup5 = 0.0;
        for (std::size_t i = 0; i < prof.phi.size(); ++i) {
            if (prof.grid.node(i) >= -5.0) sup5 = std::max(sup5, prof.phi[i]);
        }
        EXPECT_LT(sup5, prev) << c;
        prev = sup5;
    }
}

TEST(HalfLevelShift, NodeCrossing) {
    SemiWaveProfile p;
    p.grid = UniformGrid(-4.0, 0.0, 4);
    p.phi = {1.0, 0.8, 0.5, 0.2, 0.0};
    p.plateau_value = 1.0;
    const auto s = half_level_shift(p);
    EXPECT_NEAR(s.l, 2.0, 1e-14);
    p.phi = {0.45, 0.4, 0.3, 0.2, 0.0};
    p.plateau_value = 0.45;
    EXPECT_THROW(half_level_shift(p), NoCrossing);
}

TEST(HalfLevelShift, ShiftedProfileAndTrend) {
    double prev = 0.0;
    for (double c : {0.5, 1.0, 1.5, 2.0}) {
        const auto prof = accepted(c);
        const auto s = half_level_shift(prof);
        EXPECT_GT(s.l, prev) << c;
        prev = s.l;
        // shifted(x) = phi(x - l), so the node nearest 0 reads about 1/2.
        const auto& sh = s.shifted;
        double at0 = std::nan("");
        for (std::size_t i = 0; i + 1 < sh.phi.size(); ++i) {
            if (sh.grid.node(i) <= 0.0 && sh.grid.node(i + 1) >= 0.0) {
                const double t = -sh.grid.node(i) / sh.grid.spacing();
                at0 = (1 - t) * sh.phi[i] + t * sh.phi[i + 1];
            }
        }
        EXPECT_NEAR(at0, 0.5, 1e-3) << c;
    }
}

TEST(FrontSlope, NegativeConsistentAndLinearInD) {
    const auto prof = accepted(1.0);
    const double s = front_slope(prof, 1.0, kLaplace);
    EXPECT_LT(s, 0.0);
    const std::size_t n = prof.phi.size();
    const double h = prof.grid.spacing();
    const double fd = (prof.phi[n - 1] - prof.phi[n - 2]) / h;
    EXPECT_NEAR(fd, s, 5 * h);
    EXPECT_NEAR(front_slope(prof, 2.0, kLaplace), 2.0 * s, 1e-14);
}

TEST(LinearDeterminacy, ClosedFormOracles) {
    EXPECT_NEAR(linear_determinacy_speed(1.0, kLaplace, kLogistic).value(), 1.5 * std::sqrt(3.0), 1e-7);
    const double uni = oracle::golden_min([](double l) { return (std::sinh(l) / l - 1.0 + 1.0) / l; }, 0.01, 20.0);
    EXPECT_NEAR(linear_determinacy_speed(1.0, make_uniform(1.0), kLogistic).value(), uni, 1e-7);
    EXPECT_FALSE(linear_determinacy_speed(1.0, make_power(2.0), kLogistic).has_value());
}

TEST(EstimateCStar, UnsupportedTails) {
    EXPECT_THROW(estimate_cstar(1.0, make_power(2.0), kLogistic, default_semiwave_params(make_power(2.0)), 1e-3),
                 UnsupportedTail);
    EXPECT_THROW(estimate_cstar(1.0, make_power(0.8), kLogistic, default_semiwave_params(make_power(0.8)), 1e-3),
                 UnsupportedTail);
}

TEST(EstimateCStar, UniformKernelMatchesLinearOracle) {
    const Kernel k = make_uniform(1.0);
    const auto est = estimate_cstar(1.0, k, kLogistic, default_cstar_params(k), 1e-3);
    const double lin = oracle::golden_min([](double l) { return std::sinh(l) / l / l; }, 0.01, 20.0);
    EXPECT_NEAR(est.c_star, lin, 0.05 * lin);
    EXPECT_FALSE(est.disagreement_warning);
}
