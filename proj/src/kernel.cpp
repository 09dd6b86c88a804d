#include "frontlab/kernel.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "frontlab/errors.hpp"
#include "frontlab/numerics.hpp"

namespace frontlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

class LaplaceKernel final : public KernelModel {
public:
    double density(double x) const override { return 0.5 * std::exp(-std::abs(x)); }
    bool has_tail_mass() const override { return true; }
    double tail_mass(double x) const override {
        return x <= 0.0 ? 0.5 * std::exp(x) : 1.0 - 0.5 * std::exp(-x);
    }
    double tail_integral(double x) const override { return 0.5 * std::exp(std::min(x, 0.0)); }
    double total_mass() const override { return 1.0; }
    std::optional<double> exp_moment(double lambda) const override {
        const double l = std::abs(lambda);
        if (l >= 1.0) return kInf;
        return 1.0 / (1.0 - l * l);
    }
    std::optional<TailClass> tail_class() const override { return TailClass::ThinTail; }
    std::optional<double> support_radius() const override { return std::nullopt; }
    std::string name() const override { return "laplace"; }
};

class GaussianKernel final : public KernelModel {
public:
    explicit GaussianKernel(double sd) : sd_(sd) {}
    double density(double x) const override {
        const double z = x / sd_;
        return std::exp(-0.5 * z * z) / (sd_ * std::sqrt(2.0 * std::numbers::pi));
    }
    bool has_tail_mass() const override { return true; }
    double tail_mass(double x) const override {
        if (x <= 0.0) return 0.5 * std::erfc(-x / (sd_ * std::numbers::sqrt2));
        return 1.0 - tail_mass(-x);
    }
    double tail_integral(double x) const override {
        const double depth = -std::min(x, 0.0);
        return sd_ * sd_ * density(depth) - depth * tail_mass(-depth);
    }
    double total_mass() const override { return 1.0; }
    std::optional<double> exp_moment(double lambda) const override {
        return std::exp(0.5 * lambda * lambda * sd_ * sd_);
    }
    std::optional<TailClass> tail_class() const override { return TailClass::ThinTail; }
    std::optional<double> support_radius() const override { return std::nullopt; }
    std::string name() const override { return "gaussian(" + format_number(sd_) + ")"; }

private:
    double sd_;
};

class UniformKernel final : public KernelModel {
public:
    explicit UniformKernel(double radius) : r_(radius) {}
    double density(double x) const override {
        return std::abs(x) <= r_ ? 0.5 / r_ : 0.0;
    }
    bool has_tail_mass() const override { return true; }
    double tail_mass(double x) const override {
        if (x <= 0.0) return std::clamp((x + r_) / (2.0 * r_), 0.0, 1.0);
        return 1.0 - tail_mass(-x);
    }
    double tail_integral(double x) const override {
        const double depth = -std::min(x, 0.0);
        if (depth >= r_) return 0.0;
        return (r_ - depth) * (r_ - depth) / (4.0 * r_);
    }
    double total_mass() const override { return 1.0; }
    std::optional<double> exp_moment(double lambda) const override {
        const double z = lambda * r_;
        if (std::abs(z) < 1e-8) return 1.0 + z * z / 6.0;
        return std::sinh(z) / z;
    }
    std::optional<TailClass> tail_class() const override { return TailClass::CompactSupport; }
    std::optional<double> support_radius() const override { return r_; }
    std::string name() const override { return "uniform(" + format_number(r_) + ")"; }

private:
    double r_;
};

/// J(x) = C (1 + x^2)^(-s) with C = 1 / B(s - 1/2, 1/2).
///
/// For x <= 0, a(x) = I_{1/(1+x^2)}(s - 1/2, 1/2) / 2 (regularized incomplete
/// beta). Hot loops use a cubic Hermite table in t = log(1 + |x|) with the
/// exact derivative, falling back to ibeta beyond the table.
class PowerKernel final : public KernelModel {
public:
    explicit PowerKernel(double s) : s_(s) {
        norm_ = 1.0 / boost::math::beta(s_ - 0.5, 0.5);
        const auto n = static_cast<std::size_t>(std::ceil(kTableMax / kTableStep)) + 1;
        values_.resize(n);
        slopes_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) * kTableStep;
            const double depth = std::expm1(t);
            values_[i] = exact_left_tail(depth);
            // d/dt a(-depth(t)) = -J(depth) * e^t
            slopes_[i] = -density(depth) * std::exp(t);
        }
    }

    double density(double x) const override { return norm_ * std::pow(1.0 + x * x, -s_); }
    bool has_tail_mass() const override { return true; }
    double tail_mass(double x) const override {
        if (x <= 0.0) return left_tail(-x);
        return 1.0 - left_tail(x);
    }
    double tail_integral(double x) const override {
        if (s_ <= 1.0) return kInf;
        const double depth = -std::min(x, 0.0);
        return norm_ * std::pow(1.0 + depth * depth, 1.0 - s_) / (2.0 * (s_ - 1.0)) -
               depth * left_tail(depth);
    }
    double total_mass() const override { return 1.0; }
    std::optional<double> exp_moment(double lambda) const override {
        return lambda == 0.0 ? 1.0 : kInf;
    }
    std::optional<TailClass> tail_class() const override {
        return s_ > 1.0 ? TailClass::HeavyTailJ1Only : TailClass::FatTail;
    }
    std::optional<double> support_radius() const override { return std::nullopt; }
    std::string name() const override { return "power(" + format_number(s_) + ")"; }

private:
    static constexpr double kTableStep = 1e-3;
    static constexpr double kTableMax = 14.0;  // |x| up to ~1.2e6

    double exact_left_tail(double depth) const {
        const double z = 1.0 / (1.0 + depth * depth);
        return 0.5 * boost::math::ibeta(s_ - 0.5, 0.5, z);
    }

    /// a(-depth) for depth >= 0.
    double left_tail(double depth) const {
        const double t = std::log1p(depth);
        if (t >= kTableMax) return exact_left_tail(depth);
        const double pos = t / kTableStep;
        const auto i = std::min(static_cast<std::size_t>(pos), values_.size() - 2);
        const double u = pos - static_cast<double>(i);
        const double u2 = u * u;
        const double u3 = u2 * u;
        const double h00 = 2 * u3 - 3 * u2 + 1;
        const double h10 = u3 - 2 * u2 + u;
        const double h01 = -2 * u3 + 3 * u2;
        const double h11 = u3 - u2;
        return h00 * values_[i] + h10 * kTableStep * slopes_[i] + h01 * values_[i + 1] +
               h11 * kTableStep * slopes_[i + 1];
    }

    double s_;
    double norm_;
    std::vector<double> values_;
    std::vector<double> slopes_;
};

class UserKernel final : public KernelModel {
public:
    UserKernel(std::string name, std::function<double(double)> density,
               std::optional<double> support)
        : name_(std::move(name)), density_(std::move(density)), support_(support) {}
    double density(double x) const override {
        if (support_ && std::abs(x) > *support_) return 0.0;
        return density_(x);
    }
    bool has_tail_mass() const override { return false; }
    double tail_mass(double) const override {
        throw UnsupportedTail("kernel '" + name_ + "' has no analytic tail mass; truncate it first");
    }
    double tail_integral(double) const override {
        throw UnsupportedTail("kernel '" + name_ + "' has no analytic tail mass; truncate it first");
    }
    double total_mass() const override { return 1.0; }
    std::optional<double> exp_moment(double) const override { return std::nullopt; }
    std::optional<TailClass> tail_class() const override { return std::nullopt; }
    std::optional<double> support_radius() const override { return support_; }
    std::string name() const override { return name_; }

private:
    std::string name_;
    std::function<double(double)> density_;
    std::optional<double> support_;
};

class TruncatedModel final : public KernelModel {
public:
    TruncatedModel(Kernel base, double R, double ramp) : base_(std::move(base)), R_(R), ramp_(ramp) {
        const double outer = R_ + ramp_;
        if (auto br = base_.support_radius(); br && *br <= R_) {
            // Cutoff never touches the support.
            identity_ = true;
            support_ = *br;
        } else {
            support_ = outer;
        }
        if (identity_) {
            half_mass_ = base_.has_tail_mass() ? base_.tail_mass(0.0) : numeric_left(0.0);
        } else {
            ramp_mass_ = gauss_legendre([this](double y) { return density(y); }, -outer, -R_);
            if (!base_.has_tail_mass()) build_table();
            half_mass_ = tail_mass(0.0);
        }
    }

    double density(double x) const override {
        if (identity_) return base_.density(x);
        return base_.density(x) * cutoff_profile(x, R_, ramp_);
    }
    bool has_tail_mass() const override { return true; }
    double tail_mass(double x) const override {
        if (x > 0.0) return 2.0 * half_mass_ - tail_mass(-x);
        if (identity_) {
            return base_.has_tail_mass() ? base_.tail_mass(x) : numeric_left(x);
        }
        const double outer = R_ + ramp_;
        if (x <= -outer) return 0.0;
        if (x <= -R_) return gauss_legendre([this](double y) { return density(y); }, -outer, x);
        if (base_.has_tail_mass()) return ramp_mass_ + base_.tail_mass(x) - base_.tail_mass(-R_);
        return ramp_mass_ + table_lookup(x);
    }
    double tail_integral(double x) const override {
        // Integral of a over (-inf, x] equals the integral of (y - |x|) J(y) over y > |x|.
        const double depth = -std::min(x, 0.0);
        if (depth >= support_) return 0.0;
        const int panels = std::max(1, static_cast<int>(std::ceil((support_ - depth) / 0.5)));
        return gauss_legendre_composite([this, depth](double y) { return (y - depth) * density(y); },
                                        depth, support_, panels);
    }
    double total_mass() const override { return 2.0 * half_mass_; }
    std::optional<double> exp_moment(double lambda) const override {
        const int panels = std::max(1, static_cast<int>(std::ceil(2.0 * support_ / 0.5)));
        return gauss_legendre_composite(
            [this, lambda](double y) { return density(y) * std::exp(lambda * y); }, -support_,
            support_, panels);
    }
    std::optional<TailClass> tail_class() const override { return TailClass::CompactSupport; }
    std::optional<double> support_radius() const override { return support_; }
    std::string name() const override {
        return base_.name() + "|R=" + format_number(R_) + ",ramp=" + format_number(ramp_);
    }

private:
    static constexpr double kPanel = 0.5;

    double numeric_left(double x) const {
        // Only reached for identity truncations of compact user kernels.
        const double lo = -support_;
        if (x <= lo) return 0.0;
        const int panels = std::max(1, static_cast<int>(std::ceil((x - lo) / kPanel)));
        return gauss_legendre_composite([this](double y) { return base_.density(y); }, lo, x, panels);
    }

    void build_table() {
        const int panels = std::max(1, static_cast<int>(std::ceil(R_ / kPanel)));
        table_step_ = R_ / panels;
        cumulative_.assign(static_cast<std::size_t>(panels) + 1, 0.0);
        for (int p = 0; p < panels; ++p) {
            const double lo = -R_ + p * table_step_;
            cumulative_[p + 1] =
                cumulative_[p] + gauss_legendre([this](double y) { return base_.density(y); }, lo,
                                                lo + table_step_);
        }
    }

    /// Integral of the base density over [-R, x] for x in [-R, 0].
    double table_lookup(double x) const {
        const double pos = (x + R_) / table_step_;
        const auto p = std::min(static_cast<std::size_t>(pos), cumulative_.size() - 2);
        const double lo = -R_ + static_cast<double>(p) * table_step_;
        return cumulative_[p] + gauss_legendre([this](double y) { return base_.density(y); }, lo, x);
    }

    Kernel base_;
    double R_;
    double ramp_;
    bool identity_ = false;
    double support_ = 0.0;
    double ramp_mass_ = 0.0;
    double half_mass_ = 0.5;
    double table_step_ = 0.0;
    std::vector<double> cumulative_;
};

/// Partial integrals over windows D in {10, 20, 40, 80, 160}.
constexpr std::array<double, 5> kProbeDepths{10.0, 20.0, 40.0, 80.0, 160.0};

enum class ProbeVerdict { Converged, Diverged, Inconclusive };

struct ProbeResult {
    ProbeVerdict verdict;
    double last_value;
    std::string diagnostics;
};

/// Decides convergence of a nonnegative partial-integral sequence I(D_k).
///
/// Converged when the relative change drops below 1e-6, or when the doubling
/// increments decay geometrically (ratio < 0.9 twice in a row) and the
/// geometric remainder estimate is below 1e-6 relative or the ratio stays
/// stable, which identifies power-law convergence. Diverged when the doubling
/// increments stop shrinking (ratio >= 0.9) or a partial integral is not finite.
ProbeResult judge_partials(const std::array<double, kProbeDepths.size()>& partials) {
    std::ostringstream diag;
    diag << "partials:";
    for (double p : partials) diag << ' ' << p;
    for (double p : partials) {
        if (!std::isfinite(p)) return {ProbeVerdict::Diverged, kInf, diag.str()};
    }
    const std::size_t n = partials.size();
    const double last = partials[n - 1];
    const double rel = std::abs(last - partials[n - 2]) / std::max(std::abs(last), 1e-300);
    if (rel < 1e-6) return {ProbeVerdict::Converged, last, diag.str()};

    const double d1 = partials[n - 3] - partials[n - 4];
    const double d2 = partials[n - 2] - partials[n - 3];
    const double d3 = partials[n - 1] - partials[n - 2];
    if (d1 <= 0.0 || d2 <= 0.0 || d3 <= 0.0) return {ProbeVerdict::Inconclusive, last, diag.str()};
    const double r1 = d2 / d1;
    const double r2 = d3 / d2;
    diag << " ratios: " << r1 << ' ' << r2;
    if (r1 >= 0.9 && r2 >= 0.9) return {ProbeVerdict::Diverged, kInf, diag.str()};
    if (r1 < 0.9 && r2 < 0.9 && std::abs(r2 - r1) <= 0.2 * r1) {
        return {ProbeVerdict::Converged, last + d3 * r2 / (1.0 - r2), diag.str()};
    }
    return {ProbeVerdict::Inconclusive, last, diag.str()};
}

int panels_for(double width) { return std::max(1, static_cast<int>(std::ceil(width))); }

ProbeResult probe_exp_moment(const Kernel& k, double lambda) {
    std::array<double, kProbeDepths.size()> partials{};
    double prev_depth = 0.0;
    double acc = 0.0;
    const auto integrand = [&k, lambda](double y) { return k.density(y) * std::exp(lambda * y); };
    for (std::size_t i = 0; i < kProbeDepths.size(); ++i) {
        const double depth = kProbeDepths[i];
        const int panels = panels_for(depth - prev_depth);
        acc += gauss_legendre_composite(integrand, prev_depth, depth, panels);
        acc += gauss_legendre_composite(integrand, -depth, -prev_depth, panels);
        partials[i] = acc;
        prev_depth = depth;
    }
    return judge_partials(partials);
}

/// Partial integrals of the tail mass over [-D, 0], written through the first
/// moment so only the density is needed: the integral of min(y, D) J(y) over y > 0.
ProbeResult probe_tail_integral(const Kernel& k) {
    std::array<double, kProbeDepths.size()> partials{};
    double prev_depth = 0.0;
    double moment = 0.0;  // integral of y J over [0, D]
    double mass = 0.0;    // integral of J over [0, D]
    for (std::size_t i = 0; i < kProbeDepths.size(); ++i) {
        const double depth = kProbeDepths[i];
        const int panels = panels_for(depth - prev_depth);
        moment += gauss_legendre_composite([&k](double y) { return y * k.density(y); }, prev_depth,
                                           depth, panels);
        mass += gauss_legendre_composite([&k](double y) { return k.density(y); }, prev_depth, depth,
                                         panels);
        // min(y, D) over y > D contributes D times the mass beyond D.
        const double beyond = std::max(0.5 * k.total_mass() - mass, 0.0);
        partials[i] = moment + depth * beyond;
        prev_depth = depth;
    }
    return judge_partials(partials);
}

}  // namespace

std::string to_string(TailClass c) {
    switch (c) {
        case TailClass::CompactSupport: return "CompactSupport";
        case TailClass::ThinTail: return "ThinTail";
        case TailClass::HeavyTailJ1Only: return "HeavyTailJ1Only";
        case TailClass::FatTail: return "FatTail";
    }
    return "?";
}

Kernel::Kernel(std::shared_ptr<const KernelModel> model) : model_(std::move(model)) {
    if (!model_) throw InvalidArgument("Kernel: null model");
}

double Kernel::tail_mass(double x) const { return model_->tail_mass(x); }

double Kernel::tail_integral(double x) const { return model_->tail_integral(x); }

TailClass Kernel::tail_class() const {
    if (auto c = model_->tail_class()) return *c;
    return classify_tail_numeric(*this);
}

Kernel make_laplace() { return Kernel(std::make_shared<LaplaceKernel>()); }

Kernel make_gaussian(double sd) {
    if (!(sd > 0.0)) throw InvalidArgument("gaussian kernel: sd must be > 0");
    return Kernel(std::make_shared<GaussianKernel>(sd));
}

Kernel make_uniform(double radius) {
    if (!(radius > 0.0)) throw InvalidArgument("uniform kernel: radius must be > 0");
    return Kernel(std::make_shared<UniformKernel>(radius));
}

Kernel make_power(double sigma_exp) {
    if (!(sigma_exp > 0.5)) {
        throw NonNormalizable("power kernel: (1+x^2)^(-sigma) is not integrable for sigma <= 1/2");
    }
    return Kernel(std::make_shared<PowerKernel>(sigma_exp));
}

Kernel make_user_kernel(std::string name, std::function<double(double)> density,
                        std::optional<double> support_radius) {
    if (!density) throw InvalidArgument("user kernel: empty density");
    return Kernel(std::make_shared<UserKernel>(std::move(name), std::move(density), support_radius));
}

double cutoff_profile(double x, double R, double ramp) {
    const double ax = std::abs(x);
    if (ax <= R) return 1.0;
    if (ax >= R + ramp) return 0.0;
    const double r = (ax - R) / ramp;
    return 1.0 - r * r * (3.0 - 2.0 * r);
}

TruncatedKernel truncate(const Kernel& k, double R, double ramp) {
    if (!(R > 0.0)) throw InvalidArgument("truncate: R must be > 0");
    if (!(ramp > 0.0)) throw InvalidArgument("truncate: ramp must be > 0");
    Kernel jn(std::make_shared<TruncatedModel>(k, R, ramp));
    return TruncatedKernel{k, R, ramp, jn.total_mass(), jn};
}

double c_of_J(const Kernel& k, double truncation_depth) {
    if (!(truncation_depth > 0.0)) throw InvalidArgument("c_of_J: truncation depth must be > 0");
    const TailClass cls = k.tail_class();
    if (!has_finite_tail_integral(cls)) {
        throw DivergentIntegral("c(J) diverges for " + k.name() + " (" + to_string(cls) + ")");
    }
    const double quad = gauss_legendre_composite([&k](double x) { return k.tail_mass(x); },
                                                 -truncation_depth, 0.0,
                                                 panels_for(truncation_depth));
    return quad + k.tail_integral(-truncation_depth);
}

double exp_moment(const Kernel& k, double lambda) {
    if (!(lambda >= 0.0)) throw InvalidArgument("exp_moment: lambda must be >= 0");
    if (lambda == 0.0) return k.total_mass();
    if (auto v = k.model().exp_moment(lambda)) return *v;
    return exp_moment_numeric(k, lambda);
}

double exp_moment_numeric(const Kernel& k, double lambda) {
    if (!(lambda >= 0.0)) throw InvalidArgument("exp_moment: lambda must be >= 0");
    const ProbeResult r = probe_exp_moment(k, lambda);
    if (r.verdict == ProbeVerdict::Converged) return r.last_value;
    return kInf;
}

TailClass classify_tail(const Kernel& k) {
    if (auto c = k.stored_tail_class()) return *c;
    return classify_tail_numeric(k);
}

TailClass classify_tail_numeric(const Kernel& k) {
    if (k.support_radius()) return TailClass::CompactSupport;
    std::ostringstream diag;
    for (double lambda : {1.0, 0.5, 0.25, 0.125}) {
        const ProbeResult r = probe_exp_moment(k, lambda);
        if (r.verdict == ProbeVerdict::Converged) return TailClass::ThinTail;
        diag << "exp moment lambda=" << lambda << ": " << r.diagnostics << "; ";
    }
    const ProbeResult tail = probe_tail_integral(k);
    if (tail.verdict == ProbeVerdict::Converged) return TailClass::HeavyTailJ1Only;
    if (tail.verdict == ProbeVerdict::Diverged) return TailClass::FatTail;
    diag << "tail integral: " << tail.diagnostics;
    throw Undecidable("classify_tail: inconclusive probes for " + k.name() + ": " + diag.str());
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace

Kernel parse_kernel_spec(const std::string& raw) {
    const std::string spec = trim(raw);
    const auto open = spec.find('(');
    const std::string name = trim(spec.substr(0, open));
    std::optional<double> arg;
    if (open != std::string::npos) {
        const auto close = spec.find(')', open);
        if (close == std::string::npos || trim(spec.substr(close + 1)) != "") {
            throw InvalidArgument("kernel spec '" + raw + "': malformed parentheses");
        }
        const std::string inner = trim(spec.substr(open + 1, close - open - 1));
        try {
            std::size_t used = 0;
            arg = std::stod(inner, &used);
            if (used != inner.size()) throw std::invalid_argument(inner);
        } catch (const std::exception&) {
            throw InvalidArgument("kernel spec '" + raw + "': parameter is not a number");
        }
    }
    if (name == "laplace") {
        if (arg) throw InvalidArgument("kernel spec '" + raw + "': laplace takes no parameter");
        return make_laplace();
    }
    if (name == "gaussian") return make_gaussian(arg.value_or(1.0));
    if (name == "uniform") return make_uniform(arg.value_or(1.0));
    if (name == "power") {
        if (!arg) throw InvalidArgument("kernel spec '" + raw + "': power requires sigma");
        return make_power(*arg);
    }
    throw InvalidArgument("unknown kernel '" + name + "'");
}

}  // namespace frontlab
