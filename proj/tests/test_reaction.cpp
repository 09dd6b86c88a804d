#include <gtest/gtest.h>

#include <cmath>

#include "frontlab/errors.hpp"
#include "frontlab/reaction.hpp"

using namespace frontlab;

TEST(Reaction, LogisticValues) {
    const Reaction f = make_logistic();
    EXPECT_DOUBLE_EQ(f(0.5), 0.25);
    EXPECT_DOUBLE_EQ(f(-0.2), -0.2);
    EXPECT_DOUBLE_EQ(f.df0(), 1.0);
    EXPECT_DOUBLE_EQ(f.df1(), -1.0);
    EXPECT_DOUBLE_EQ(f.cap_K0(), 1.0);
    EXPECT_NEAR(f.effective_lipschitz(), 1.1, 1e-15);
    for (double u = 0.01; u < 1.0; u += 0.01) EXPECT_NEAR(f(u) / u, 1.0 - u, 1e-15);
}

TEST(Reaction, ExtensionContinuousAtZero) {
    const Reaction f = make_logistic();
    const double e = 1e-7;
    EXPECT_EQ(f(0.0), 0.0);
    EXPECT_NEAR((f(0.0) - f(-e)) / e, f.df0(), 1e-12);
    EXPECT_NEAR((f(e) - f(0.0)) / e, f.df0(), 1e-6);
}

TEST(Reaction, ValidateLogistic) {
    const auto rep = validate_kpp(make_logistic());
    EXPECT_TRUE(rep.all_passed());
}

TEST(Reaction, ValidateDegenerateSlope) {
    const auto rep = validate_kpp(make_polynomial({0.0, 0.0, 1.0, -1.0}));
    EXPECT_FALSE(rep.all_passed());
    ASSERT_NE(rep.find("f'(0)>0"), nullptr);
    EXPECT_FALSE(rep.find("f'(0)>0")->passed);
}

TEST(Reaction, ValidateIncreasingPerCapita) {
    // u (1 - u)(1 + 2u) = u + u^2 - 2u^3
    const auto rep = validate_kpp(make_polynomial({0.0, 1.0, 1.0, -2.0}));
    ASSERT_NE(rep.find("f(u)/u nonincreasing"), nullptr);
    EXPECT_FALSE(rep.find("f(u)/u nonincreasing")->passed);
    EXPECT_GT(rep.find("f(u)/u nonincreasing")->worst_violation, 0.0);
    EXPECT_TRUE(rep.find("f'(0)>0")->passed);
}

TEST(Reaction, PolynomialMatchesLogistic) {
    const Reaction p = make_polynomial({0.0, 1.0, -1.0});
    const Reaction l = make_logistic();
    for (double u = -0.5; u <= 2.0; u += 0.05) EXPECT_NEAR(p(u), l(u), 1e-14);
    EXPECT_NEAR(p.df0(), 1.0, 1e-14);
    EXPECT_NEAR(p.df1(), -1.0, 1e-14);
    EXPECT_NEAR(p.cap_K0(), 1.0, 1e-3);
}

TEST(AdjustedReaction, Examples) {
    const Reaction f = make_logistic();
    EXPECT_NEAR(adjust_for_truncation(f, 1.0).eta_n, 1.0, 1e-12);
    const auto a9 = adjust_for_truncation(f, 0.9);
    EXPECT_NEAR(a9.eta_n, 0.9, 1e-12);
    EXPECT_NEAR(a9(0.5), 0.5 * 0.5 - 0.1 * 0.5, 1e-15);
    EXPECT_NEAR(adjust_for_truncation(f, 0.99).eta_n, 0.99, 1e-12);
    EXPECT_NEAR(std::abs(a9(a9.eta_n)), 0.0, 1e-12);
    EXPECT_THROW(adjust_for_truncation(f, 0.0), InvalidArgument);
    EXPECT_THROW(adjust_for_truncation(make_polynomial({0.0, 0.05, -0.05}), 0.9), DegenerateAdjustment);
}

TEST(AdjustedReaction, Properties) {
    const Reaction f = make_logistic();
    double prev = 0.0;
    for (double s : {0.2, 0.4, 0.6, 0.8, 0.9, 0.99, 1.0}) {
        const auto a = adjust_for_truncation(f, s);
        EXPECT_GT(a.eta_n, prev);
        prev = a.eta_n;
        for (double u = 0.0; u <= f.cap_K0(); u += 0.01) EXPECT_LE(a(u), f(u) + 1e-15);
    }
}
