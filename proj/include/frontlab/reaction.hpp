#pragma once

#include <functional>
#include <string>
#include <vector>

namespace frontlab {

/// KPP reaction term f(u). Evaluating below zero uses the linear extension
/// f(u) = f'(0) u.
class Reaction {
public:
    Reaction(std::string name, std::function<double(double)> f, std::function<double(double)> df,
             double lipschitz_K, double cap_K0);

    double operator()(double u) const { return u < 0.0 ? df0_ * u : f_(u); }
    double derivative(double u) const { return u < 0.0 ? df0_ : df_(u); }

    const std::string& name() const { return name_; }
    double df0() const { return df0_; }
    double df1() const { return df1_; }
    /// Lipschitz constant of f on [0, cap_K0].
    double lipschitz_K() const { return lipschitz_K_; }
    /// lipschitz_K inflated by 10%; used for M and time step choices.
    double effective_lipschitz() const { return 1.1 * lipschitz_K_; }
    double cap_K0() const { return cap_K0_; }

private:
    std::string name_;
    std::function<double(double)> f_;
    std::function<double(double)> df_;
    double df0_;
    double df1_;
    double lipschitz_K_;
    double cap_K0_;
};

/// f(u) = u (1 - u).
Reaction make_logistic();

/// f(u) = sum_k coeffs[k] u^k. Lipschitz constant and K0 are estimated on a
/// sample grid.
Reaction make_polynomial(std::vector<double> coeffs, int n_samples = 10000);

struct ClauseCheck {
    std::string clause;
    bool passed = true;
    double worst_violation = 0.0;
};

struct ValidationReport {
    std::vector<ClauseCheck> clauses;
    bool all_passed() const;
    const ClauseCheck* find(const std::string& clause) const;
};

/// Samples the KPP clauses on a uniform grid of (0, 1).
ValidationReport validate_kpp(const Reaction& r, int n_samples = 10000);

/// f_n(u) = f(u) - d (1 - sigma_n) u with its positive zero eta_n.
///
/// With d = 1 this is the adjusted reaction used when the kernel is replaced by
/// a truncation of mass sigma_n; general d gives the plateau level of the
/// truncated semi-wave problem.
struct AdjustedReaction {
    Reaction base;
    double sigma_n = 1.0;
    double d = 1.0;
    double eta_n = 1.0;

    double operator()(double u) const { return base(u) - d * (1.0 - sigma_n) * u; }
};

AdjustedReaction adjust_for_truncation(const Reaction& r, double sigma_n, double d = 1.0);

}  // namespace frontlab
