#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "frontlab/errors.hpp"
#include "frontlab/kernel.hpp"

using namespace frontlab;

namespace {

std::vector<Kernel> builtins() {
    return {make_laplace(),  make_gaussian(1.0), make_gaussian(2.5), make_uniform(1.0), make_uniform(3.0),
            make_power(0.8), make_power(1.0),    make_power(1.5),    make_power(2.0)};
}

}  // namespace

TEST(Kernel, LaplaceClosedForms) {
    const Kernel k = make_laplace();
    EXPECT_DOUBLE_EQ(k.density(0.0), 0.5);
    EXPECT_NEAR(k.density(-1.3), 0.5 * std::exp(-1.3), 1e-16);
    EXPECT_NEAR(k.tail_mass(-2.0), 0.5 * std::exp(-2.0), 1e-16);
    EXPECT_EQ(k.tail_class(), TailClass::ThinTail);
}

TEST(Kernel, CauchyClosedForms) {
    const Kernel k = make_power(1.0);
    EXPECT_NEAR(k.density(2.0), 1.0 / (std::numbers::pi * 5.0), 1e-15);
    for (double x : {-50.0, -3.0, -0.2, 0.0, 0.7, 9.0}) {
        EXPECT_NEAR(k.tail_mass(x), 0.5 + std::atan(x) / std::numbers::pi, 1e-13) << x;
    }
    EXPECT_EQ(k.tail_class(), TailClass::FatTail);
}

TEST(Kernel, PowerFamilyClasses) {
    EXPECT_EQ(make_power(2.0).tail_class(), TailClass::HeavyTailJ1Only);
    EXPECT_EQ(make_power(0.8).tail_class(), TailClass::FatTail);
    EXPECT_THROW(make_power(0.5), NonNormalizable);
    EXPECT_THROW(make_power(0.3), NonNormalizable);
}

TEST(Kernel, CofJ) {
    EXPECT_NEAR(c_of_J(make_laplace()), 0.5, 1e-6);
    EXPECT_NEAR(c_of_J(make_uniform(1.0)), 0.25, 1e-10);
    EXPECT_THROW(c_of_J(make_power(1.0)), DivergentIntegral);
    EXPECT_THROW(c_of_J(make_power(0.8)), DivergentIntegral);
    // Half the first absolute moment: 1 / pi for power(2).
    EXPECT_NEAR(c_of_J(make_power(2.0)), 1.0 / std::numbers::pi, 1e-8);
}

TEST(Kernel, ExpMoment) {
    EXPECT_NEAR(exp_moment(make_laplace(), 0.5), 4.0 / 3.0, 1e-14);
    for (const auto& k : builtins()) EXPECT_NEAR(exp_moment(k, 0.0), 1.0, 1e-10) << k.name();
    EXPECT_TRUE(std::isinf(exp_moment(make_power(2.0), 0.1)));
    EXPECT_TRUE(std::isinf(exp_moment(make_laplace(), 1.0)));
    EXPECT_NEAR(exp_moment(make_gaussian(1.0), 0.7), std::exp(0.5 * 0.49), 1e-12);
    EXPECT_NEAR(exp_moment(make_uniform(1.0), 0.7), std::sinh(0.7) / 0.7, 1e-12);
    // Quadrature path agrees with the closed forms.
    EXPECT_NEAR(exp_moment_numeric(make_laplace(), 0.5), 4.0 / 3.0, 1e-8);
    EXPECT_TRUE(std::isinf(exp_moment_numeric(make_power(2.0), 0.1)));
}

TEST(Kernel, TruncateExamples) {
    const auto tl = truncate(make_laplace(), 40.0, 1.0);
    EXPECT_GE(tl.sigma_n, 1.0 - std::exp(-40.0));
    EXPECT_LE(tl.sigma_n, 1.0);
    EXPECT_EQ(tl.kernel.tail_class(), TailClass::CompactSupport);

    const auto tu = truncate(make_uniform(1.0), 5.0, 1.0);
    EXPECT_NEAR(tu.sigma_n, 1.0, 1e-12);
    for (double x : {-0.9, -0.3, 0.0, 0.5, 0.99}) EXPECT_DOUBLE_EQ(tu.kernel.density(x), make_uniform(1.0).density(x));

    double prev = 0.0;
    for (double R : {5.0, 10.0, 20.0, 40.0, 80.0}) {
        const auto t = truncate(make_power(0.8), R, 1.0);
        EXPECT_GT(t.sigma_n, prev);
        EXPECT_LE(t.sigma_n, 1.0);
        prev = t.sigma_n;
    }
    EXPECT_THROW(truncate(make_laplace(), -1.0, 1.0), InvalidArgument);
    EXPECT_THROW(truncate(make_laplace(), 1.0, 0.0), InvalidArgument);
}

TEST(Kernel, TruncationIsPointwiseMonotone) {
    const Kernel base = make_power(0.8);
    const auto a = truncate(base, 10.0, 1.0);
    const auto b = truncate(base, 20.0, 1.0);
    for (double x = -25.0; x <= 25.0; x += 0.173) {
        EXPECT_LE(a.kernel.density(x), b.kernel.density(x) + 1e-16);
        EXPECT_LE(b.kernel.density(x), base.density(x) + 1e-16);
    }
    EXPECT_DOUBLE_EQ(cutoff_profile(3.0, 3.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(cutoff_profile(4.0, 3.0, 1.0), 0.0);
    EXPECT_NEAR(cutoff_profile(3.5, 3.0, 1.0), 0.5, 1e-15);
}

TEST(Kernel, ParseSpec) {
    EXPECT_EQ(parse_kernel_spec("laplace").tail_class(), TailClass::ThinTail);
    EXPECT_EQ(parse_kernel_spec(" power(2) ").tail_class(), TailClass::HeavyTailJ1Only);
    EXPECT_EQ(parse_kernel_spec("uniform(2)").support_radius().value(), 2.0);
    EXPECT_NEAR(parse_kernel_spec("gaussian(0.5)").density(0.0), 1.0 / (0.5 * std::sqrt(2 * std::numbers::pi)),
                1e-14);
    EXPECT_THROW(parse_kernel_spec("cauchy"), InvalidArgument);
    EXPECT_THROW(parse_kernel_spec("power(x)"), InvalidArgument);
    EXPECT_THROW(parse_kernel_spec("uniform(-1)"), InvalidArgument);
}

TEST(Kernel, UserKernelNeedsTruncation) {
    const Kernel u = make_user_kernel("tent", [](double x) { return std::max(0.0, 1.0 - std::abs(x)); }, 1.0);
    EXPECT_FALSE(u.has_tail_mass());
    const auto t = truncate(u, 1.0, 0.5);
    EXPECT_TRUE(t.kernel.has_tail_mass());
    EXPECT_NEAR(t.sigma_n, 1.0, 1e-8);
    EXPECT_NEAR(t.kernel.tail_mass(0.0), 0.5, 1e-8);
}

// Properties over every built-in kernel.

TEST(KernelProperties, TailMassSymmetryAtRandomPoints) {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> dist(-60.0, 60.0);
    for (const auto& k : builtins()) {
        for (int i = 0; i < 200; ++i) {
            const double x = dist(rng);
            EXPECT_LT(std::abs(k.tail_mass(x) + k.tail_mass(-x) - 1.0), 1e-12) << k.name() << " x=" << x;
            EXPECT_EQ(k.density(x), k.density(-x)) << k.name();
        }
    }
}

TEST(KernelProperties, TailMassShape) {
    for (const auto& k : builtins()) {
        EXPECT_GT(k.density(0.0), 0.0) << k.name();
        EXPECT_NEAR(k.total_mass(), 1.0, 1e-12) << k.name();
        EXPECT_LT(k.tail_mass(-1e8), 1e-3) << k.name();
        EXPECT_GT(k.tail_mass(1e8), 1.0 - 1e-3) << k.name();
        double prev = k.tail_mass(-200.0);
        for (double x = -200.0; x <= 200.0; x += 0.37) {
            const double a = k.tail_mass(x);
            EXPECT_GE(a, prev - 1e-15) << k.name() << " x=" << x;
            prev = a;
        }
    }
}

TEST(KernelProperties, DerivativeOfTailMassIsDensity) {
    std::mt19937_64 rng(7);
    for (const auto& k : builtins()) {
        const double span = k.support_radius() ? *k.support_radius() : 30.0;
        std::uniform_real_distribution<double> dist(-span, span);
        for (int i = 0; i < 50; ++i) {
            double x = dist(rng);
            if (k.support_radius() && std::abs(std::abs(x) - span) < 1e-3) x *= 0.5;
            const double step = 1e-5;
            const double fd = (k.tail_mass(x + step) - k.tail_mass(x - step)) / (2 * step);
            EXPECT_NEAR(fd, k.density(x), 1e-6 * (1.0 + k.density(x))) << k.name() << " x=" << x;
        }
    }
}

TEST(KernelProperties, ClassifierMatchesStoredClass) {
    for (const auto& k : builtins()) {
        EXPECT_EQ(classify_tail(k), k.stored_tail_class().value()) << k.name();
    }
    for (const auto& k : {make_laplace(), make_gaussian(1.0), make_uniform(1.0), make_power(0.8),
                          make_power(1.0), make_power(2.0)}) {
        EXPECT_EQ(classify_tail_numeric(k), k.stored_tail_class().value()) << k.name();
    }
}

TEST(KernelProperties, TailConditionsByClass) {
    for (const auto& k : builtins()) {
        const TailClass c = k.tail_class();
        if (c == TailClass::ThinTail) {
            EXPECT_TRUE(std::isfinite(exp_moment(k, 0.1))) << k.name();
        }
        if (c != TailClass::FatTail) {
            EXPECT_TRUE(std::isfinite(k.tail_integral(0.0))) << k.name();
        } else {
            EXPECT_TRUE(std::isinf(k.tail_integral(0.0))) << k.name();
        }
    }
}

TEST(KernelProperties, TruncatedCofJIncreasesToLimit) {
    for (const auto& k : {make_laplace(), make_power(2.0), make_gaussian(1.0)}) {
        const double full = c_of_J(k);
        double prev = 0.0;
        for (double R : {2.0, 5.0, 10.0, 20.0, 40.0}) {
            const double cR = c_of_J(truncate(k, R, 1.0).kernel);
            EXPECT_GE(cR, prev) << k.name() << " R=" << R;
            EXPECT_LE(cR, full + 1e-9) << k.name() << " R=" << R;
            prev = cR;
        }
        EXPECT_GT(prev, 0.9 * full) << k.name();
    }
}
