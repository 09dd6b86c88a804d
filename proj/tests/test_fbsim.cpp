#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "frontlab/errors.hpp"
#include "frontlab/fbsim.hpp"
#include "oracles.hpp"

using namespace frontlab;

namespace {

const Kernel kLaplace = make_laplace();
const Reaction kLogistic = make_logistic();

SimConfig reference(double T = 200.0) {
    SimConfig c;
    c.d = 1.0;
    c.mu = 1.0;
    c.h0 = 10.0;
    c.T = T;
    c.dx = 0.1;
    c.sample_dt = 0.5;
    return c;
}

FrontTrajectory line(double T, double h_start, double speed) {
    FrontTrajectory tr;
    for (int i = 0; i <= 400; ++i) {
        const double t = T * i / 400.0;
        tr.record(t, -(h_start + speed * t), h_start + speed * t);
    }
    return tr;
}

void fill(FieldState& s, double value) {
    const auto [lo, hi] = s.active_range();
    for (std::size_t i = lo; i <= hi; ++i) s.u[i] = value;
}

}  // namespace

TEST(InitialData, ParseAndEvaluate) {
    const auto p = parse_initial_data("parabola(0.5)");
    EXPECT_EQ(p.family, InitialData::Family::Parabola);
    EXPECT_DOUBLE_EQ(p(0.0, 10.0), 0.5);
    EXPECT_DOUBLE_EQ(p(10.0, 10.0), 0.0);
    EXPECT_DOUBLE_EQ(p(5.0, 10.0), 0.375);
    const auto c = parse_initial_data("cosine");
    EXPECT_NEAR(c(10.0, 10.0), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(c(0.0, 10.0), 1.0);
    EXPECT_THROW(parse_initial_data("gaussian(1)"), InvalidArgument);
    EXPECT_THROW(parse_initial_data("parabola(-1)"), InvalidArgument);
}

TEST(FieldState, InitialInvariants) {
    const auto s = initial_state(10.0, 0.1, InitialData{});
    EXPECT_EQ(s.g, -10.0);
    EXPECT_EQ(s.h, 10.0);
    EXPECT_EQ(s.t, 0.0);
    EXPECT_EQ(s.at_node(100), 0.0);
    EXPECT_EQ(s.at_node(-100), 0.0);
    EXPECT_DOUBLE_EQ(s.at_node(0), 1.0);
    const auto [x, u] = s.profile();
    EXPECT_EQ(x.front(), -10.0);
    EXPECT_EQ(x.back(), 10.0);
    EXPECT_EQ(u.front(), 0.0);
    EXPECT_EQ(u.back(), 0.0);
}

TEST(Step, ZeroMuFreezesBoundaries) {
    FieldState s = initial_state(10.0, 0.1, InitialData{});
    for (int i = 0; i < 20; ++i) s = step(s, 0.05, 1.0, 0.0, kLaplace, kLogistic);
    EXPECT_EQ(s.g, -10.0);
    EXPECT_EQ(s.h, 10.0);
    EXPECT_NEAR(s.t, 1.0, 1e-12);
}

TEST(Step, ZeroDensityIsStationary) {
    FieldState s = initial_state(10.0, 0.1, InitialData{});
    std::fill(s.u.begin(), s.u.end(), 0.0);
    const FieldState n = step(s, 0.05, 1.0, 1.0, kLaplace, kLogistic);
    EXPECT_EQ(n.g, s.g);
    EXPECT_EQ(n.h, s.h);
    for (double v : n.u) EXPECT_EQ(v, 0.0);
}

TEST(Step, SymmetryPreserved) {
    const FieldState s = initial_state(10.0, 0.1, InitialData{});
    const FieldState n = step(s, 0.05, 1.0, 1.0, kLaplace, kLogistic);
    EXPECT_NEAR(n.g + n.h, 0.0, 1e-14);
    EXPECT_GT(n.h, s.h);
    for (std::ptrdiff_t j = 0; j <= 110; ++j) EXPECT_NEAR(n.at_node(j), n.at_node(-j), 1e-15) << j;
}

TEST(Step, RejectsUnstableStep) {
    FreeBoundarySolver solver(initial_state(10.0, 0.1, InitialData{}), 1.0, 1.0, kLaplace, kLogistic, 1.0);
    const double bound = solver.stability_bound();
    EXPECT_GT(bound, 0.0);
    EXPECT_THROW(solver.step(2.0 * bound + 1.0), StepRejected);
    EXPECT_NO_THROW(solver.step(0.5 * bound));
}

TEST(TimeStep, DefaultRule) {
    const auto dt = default_time_step(reference(), kLaplace, kLogistic);
    ASSERT_TRUE(dt.has_value());
    EXPECT_NEAR(*dt, std::min(0.2 / 2.1, 0.25 * 0.1 / 0.5), 1e-15);
    SimConfig fat = reference();
    EXPECT_FALSE(default_time_step(fat, make_power(0.8), kLogistic).has_value());
    fat.v_cap = 10.0;
    EXPECT_NEAR(*default_time_step(fat, make_power(0.8), kLogistic), 0.25 * 0.1 / 10.0, 1e-15);
}

TEST(Simulate, ReferenceRunInvariants) {
    const auto res = simulate(reference(), kLaplace, kLogistic);
    const auto& tr = res.trajectory;
    ASSERT_GT(tr.size(), 100u);
    EXPECT_EQ(res.stats.clamp_below, 0);
    EXPECT_EQ(res.stats.clamp_above, 0);
    EXPECT_LT(res.max_asymmetry, 1e-10);
    for (std::size_t i = 1; i < tr.size(); ++i) {
        ASSERT_GT(tr.t[i], tr.t[i - 1]);
        ASSERT_GE(tr.h[i], tr.h[i - 1]);
        ASSERT_LE(tr.g[i], tr.g[i - 1]);
        ASSERT_LT(std::abs(tr.g[i] + tr.h[i]), 1e-10);
    }
    for (double v : res.final_state.u) {
        ASSERT_GE(v, 0.0);
        ASSERT_LE(v, 1.0 + 1e-12);
    }
    EXPECT_GT(res.final_state.h, 5.0 * 10.0);
    const auto oc = classify_outcome(tr, res.final_state, 10.0);
    EXPECT_EQ(oc.tag, OutcomeTag::Spreading) << oc.evidence;
}

TEST(Simulate, SnapshotsAndSampling) {
    SimConfig c = reference(10.0);
    c.snap_dt = 2.5;
    const auto res = simulate(c, kLaplace, kLogistic);
    EXPECT_EQ(res.trajectory.size(), 21u);
    EXPECT_NEAR(res.trajectory.t.back(), 10.0, 1e-12);
    ASSERT_EQ(res.trajectory.snapshots.size(), 5u);
    EXPECT_NEAR(res.trajectory.snapshots[2].t, 5.0, 1e-12);
}

TEST(Simulate, ComparisonInMu) {
    SimConfig a = reference(60.0), b = reference(60.0);
    a.mu = 0.5;
    b.mu = 2.0;
    const auto ra = simulate(a, kLaplace, kLogistic);
    const auto rb = simulate(b, kLaplace, kLogistic);
    ASSERT_EQ(ra.trajectory.size(), rb.trajectory.size());
    for (std::size_t i = 0; i < ra.trajectory.size(); ++i) {
        ASSERT_LE(ra.trajectory.h[i], rb.trajectory.h[i] + a.dx) << i;
    }
}

TEST(Simulate, ComparisonInTruncation) {
    const Kernel base = make_power(2.0);
    const Kernel j10 = truncate(base, 10.0, 1.0).kernel;
    const Kernel j20 = truncate(base, 20.0, 1.0).kernel;
    SimConfig c = reference(40.0);
    c.dt = 0.02;
    const auto r10 = simulate(c, j10, kLogistic);
    const auto r20 = simulate(c, j20, kLogistic);
    for (std::size_t i = 0; i < r10.trajectory.size(); ++i) {
        ASSERT_LE(r10.trajectory.h[i], r20.trajectory.h[i] + c.dx) << i;
    }
}

TEST(Simulate, RefinementConsistency) {
    SimConfig coarse = reference();
    SimConfig fine = reference();
    const double dt = *default_time_step(coarse, kLaplace, kLogistic);
    coarse.dt = dt;
    fine.dx = 0.05;
    fine.dt = 0.5 * dt;
    const double hc = simulate(coarse, kLaplace, kLogistic).final_state.h;
    const double hf = simulate(fine, kLaplace, kLogistic).final_state.h;
    EXPECT_LT(std::abs(hc - hf) / hf, 0.02);
}

TEST(Classify, Thresholds) {
    FieldState tiny = initial_state(10.0, 0.1, InitialData{});
    fill(tiny, 1e-9);
    const auto v = classify_outcome(line(200.0, 10.5, 0.0), tiny, 10.0);
    EXPECT_EQ(v.tag, OutcomeTag::Vanishing) << v.evidence;

    FieldState wide = initial_state(200.0, 0.5, InitialData{});
    fill(wide, 0.99);
    const auto s = classify_outcome(line(200.0, 10.0, 0.95), wide, 10.0);
    EXPECT_EQ(s.tag, OutcomeTag::Spreading) << s.evidence;
    EXPECT_NEAR(s.span, 400.0, 1e-12);

    FieldState mid = initial_state(30.0, 0.1, InitialData{});
    fill(mid, 0.4);
    const auto u = classify_outcome(line(200.0, 10.0, 0.1), mid, 10.0);
    EXPECT_EQ(u.tag, OutcomeTag::Undecided) << u.evidence;
}

TEST(MeasureSpeed, SyntheticTrajectories) {
    FrontTrajectory lin;
    FrontTrajectory conv;
    for (int i = 0; i <= 800; ++i) {
        const double t = 0.25 * i;
        lin.record(t, -2.0 * t, 2.0 * t);
        conv.record(t, -std::pow(t, 1.5), std::pow(t, 1.5));
    }
    const auto a = measure_speed(lin);
    EXPECT_NEAR(a.slope_h, 2.0, 1e-12);
    EXPECT_NEAR(a.slope_g, -2.0, 1e-12);
    ASSERT_EQ(a.dyadic_slopes.size(), 5u);
    for (double s : a.dyadic_slopes) EXPECT_NEAR(s, 2.0, 1e-12);

    const auto b = measure_speed(conv);
    for (std::size_t i = 1; i < b.dyadic_slopes.size(); ++i) EXPECT_GT(b.dyadic_slopes[i], b.dyadic_slopes[i - 1]);

    FrontTrajectory shorty;
    for (int i = 0; i < 6; ++i) shorty.record(i, -1.0, 1.0);
    EXPECT_THROW(measure_speed(shorty), InsufficientData);
}

TEST(TruncatedSpeed, ThinKernelSequence) {
    const auto seq = truncated_speed_sequence(kLaplace, {5.0, 10.0, 20.0}, 1.0, 1.0, kLogistic);
    ASSERT_EQ(seq.size(), 3u);
    for (std::size_t i = 0; i < seq.size(); ++i) {
        ASSERT_TRUE(seq[i].c_n.has_value()) << seq[i].error;
        EXPECT_LE(seq[i].sigma_n, 1.0);
        EXPECT_LE(seq[i].eta_n, 1.0);
        if (i) { EXPECT_GE(*seq[i].c_n, *seq[i - 1].c_n - 1e-7); }
    }
    EXPECT_THROW(truncated_speed_sequence(kLaplace, {10.0, 5.0}, 1.0, 1.0, kLogistic), InvalidArgument);
}

TEST(PrincipalEigenvalue, LimitsAndOracle) {
    EXPECT_NEAR(principal_eigenvalue(1e-3, 1.0, kLaplace, 1.0), 0.0, 1e-3);
    EXPECT_NEAR(principal_eigenvalue(1e-3, 2.0, kLaplace, 0.5), -1.5, 2e-3);
    const double l80 = principal_eigenvalue(80.0, 1.0, kLaplace, 1.0);
    EXPECT_GT(l80, 0.9);
    EXPECT_LT(l80, 1.0);
    double prev = -1e9;
    for (double ell : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0, 80.0}) {
        const double lp = principal_eigenvalue(ell, 1.0, kLaplace, 1.0);
        EXPECT_NEAR(lp, oracle::dense_principal_eigenvalue(ell, 1.0, kLaplace, 1.0, 400), 1e-9) << ell;
        EXPECT_GT(lp, prev) << ell;
        prev = lp;
    }
    EXPECT_THROW(principal_eigenvalue(0.0, 1.0, kLaplace, 1.0), InvalidArgument);
}
