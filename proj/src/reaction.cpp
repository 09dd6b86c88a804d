#include "frontlab/reaction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "frontlab/errors.hpp"
#include "frontlab/numerics.hpp"

namespace frontlab {

Reaction::Reaction(std::string name, std::function<double(double)> f,
                   std::function<double(double)> df, double lipschitz_K, double cap_K0)
    : name_(std::move(name)),
      f_(std::move(f)),
      df_(std::move(df)),
      df0_(0.0),
      df1_(0.0),
      lipschitz_K_(lipschitz_K),
      cap_K0_(cap_K0) {
    if (!f_ || !df_) throw InvalidArgument("Reaction: f and df are required");
    if (!(lipschitz_K > 0.0)) throw InvalidArgument("Reaction: Lipschitz constant must be > 0");
    if (!(cap_K0 > 0.0)) throw InvalidArgument("Reaction: K0 must be > 0");
    df0_ = df_(0.0);
    df1_ = df_(1.0);
}

Reaction make_logistic() {
    return Reaction(
        "logistic", [](double u) { return u * (1.0 - u); }, [](double u) { return 1.0 - 2.0 * u; },
        1.0, 1.0);
}

Reaction make_polynomial(std::vector<double> coeffs, int n_samples) {
    if (coeffs.empty()) throw InvalidArgument("polynomial reaction: no coefficients");
    if (n_samples < 100) throw InvalidArgument("polynomial reaction: need >= 100 samples");
    auto f = [coeffs](double u) {
        double acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * u + *it;
        return acc;
    };
    auto df = [coeffs](double u) {
        double acc = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 1;) acc = acc * u + static_cast<double>(k) * coeffs[k];
        return acc;
    };

    // K0: past the last sampled nonnegative value on (1, 10].
    double cap = 1.0;
    for (int j = 1; j <= n_samples; ++j) {
        const double u = 1.0 + 9.0 * j / n_samples;
        if (f(u) >= 0.0) cap = std::min(10.0, 1.0 + 9.0 * (j + 1) / n_samples);
    }

    double lip = 0.0;
    for (int j = 0; j < n_samples; ++j) {
        const double u0 = cap * j / n_samples;
        const double u1 = cap * (j + 1) / n_samples;
        lip = std::max(lip, std::abs(f(u1) - f(u0)) / (u1 - u0));
    }
    lip = std::max(lip, std::numeric_limits<double>::min());

    std::string name = "polynomial(";
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (k) name += ",";
        name += std::to_string(coeffs[k]);
    }
    name += ")";
    return Reaction(std::move(name), f, df, lip, cap);
}

bool ValidationReport::all_passed() const {
    return std::all_of(clauses.begin(), clauses.end(), [](const ClauseCheck& c) { return c.passed; });
}

const ClauseCheck* ValidationReport::find(const std::string& clause) const {
    for (const auto& c : clauses) {
        if (c.clause == clause) return &c;
    }
    return nullptr;
}

ValidationReport validate_kpp(const Reaction& r, int n_samples) {
    if (n_samples < 100) throw InvalidArgument("validate_kpp: n_samples must be >= 100");
    constexpr double kRoundoff = 1e-12;
    ValidationReport rep;

    auto point_clause = [&rep](std::string name, double violation) {
        rep.clauses.push_back({std::move(name), violation <= kRoundoff, std::max(violation, 0.0)});
    };
    point_clause("f(0)=0", std::abs(r(0.0)));
    point_clause("f(1)=0", std::abs(r(1.0)));

    double min_f = std::numeric_limits<double>::infinity();
    double ratio_increase = 0.0;
    double prev_ratio = 0.0;
    for (int j = 1; j <= n_samples; ++j) {
        const double u = static_cast<double>(j) / (n_samples + 1);
        const double fu = r(u);
        min_f = std::min(min_f, fu);
        const double ratio = fu / u;
        if (j > 1) ratio_increase = std::max(ratio_increase, ratio - prev_ratio);
        prev_ratio = ratio;
    }
    rep.clauses.push_back({"f>0 on (0,1)", min_f > 0.0, std::max(-min_f, 0.0)});
    point_clause("f'(0)>0", r.df0() > 0.0 ? 0.0 : std::max(-r.df0(), 1.0));
    point_clause("f'(1)<0", r.df1() < 0.0 ? 0.0 : std::max(r.df1(), 1.0));
    rep.clauses.push_back({"f(u)/u nonincreasing", ratio_increase <= kRoundoff,
                           std::max(ratio_increase, 0.0)});

    double max_beyond = -std::numeric_limits<double>::infinity();
    const double K0 = r.cap_K0();
    for (int j = 1; j <= n_samples; ++j) {
        max_beyond = std::max(max_beyond, r(K0 + 10.0 * j / n_samples));
    }
    rep.clauses.push_back({"f<0 for u>=K0", max_beyond < 0.0, std::max(max_beyond, 0.0)});
    return rep;
}

AdjustedReaction adjust_for_truncation(const Reaction& r, double sigma_n, double d) {
    if (!(sigma_n > 0.0 && sigma_n <= 1.0)) {
        throw InvalidArgument("adjust_for_truncation: sigma_n must lie in (0, 1]");
    }
    if (!(d > 0.0)) throw InvalidArgument("adjust_for_truncation: d must be > 0");
    const double loss = d * (1.0 - sigma_n);
    if (!(r.df0() - loss > 0.0)) {
        throw DegenerateAdjustment("adjust_for_truncation: f_n'(0) = " +
                                   std::to_string(r.df0() - loss) + " <= 0");
    }
    AdjustedReaction adj{r, sigma_n, d, 1.0};
    if (loss == 0.0) return adj;

    // -f_n increases through its zero eta_n in (0, 1].
    auto neg = [&adj](double u) { return -adj(u); };
    double lo = 1.0 - 2.0 * loss / std::max(std::abs(r.df1()), 1e-12);
    lo = std::clamp(lo, 1e-12, 1.0 - 1e-12);
    while (neg(lo) >= 0.0 && lo > 1e-12) lo *= 0.5;
    if (neg(lo) >= 0.0) {
        throw DegenerateAdjustment("adjust_for_truncation: f_n has no positive zero in (0, 1)");
    }
    if (!(neg(1.0) > 0.0)) {
        adj.eta_n = 1.0;
        return adj;
    }
    adj.eta_n = bisect_bracket(neg, lo, 1.0, 1e-16, 1e-15).root;
    return adj;
}

}  // namespace frontlab
