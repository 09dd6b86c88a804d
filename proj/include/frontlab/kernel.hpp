#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace frontlab {

/// Tail classes ordered from thinnest to fattest.
///
/// ThinTail means a finite one-sided exponential moment exists. HeavyTailJ1Only
/// kernels have an integrable tail mass over the half-line but no exponential
/// moment. FatTail kernels violate even that and produce accelerating fronts.
enum class TailClass { CompactSupport, ThinTail, HeavyTailJ1Only, FatTail };

std::string to_string(TailClass c);

/// True when the integral of the tail mass over the half-line is finite.
inline bool has_finite_tail_integral(TailClass c) { return c != TailClass::FatTail; }

/// Implementation interface behind Kernel. Built-in kernels supply closed forms.
class KernelModel {
public:
    virtual ~KernelModel() = default;

    virtual double density(double x) const = 0;
    virtual bool has_tail_mass() const = 0;
    /// a(x) = integral of the density over (-inf, x].
    virtual double tail_mass(double x) const = 0;
    /// Integral of a over (-inf, x] for x <= 0. +inf when it diverges.
    virtual double tail_integral(double x) const = 0;
    virtual double total_mass() const = 0;
    /// Closed-form exponential moment; nullopt when the model has none.
    virtual std::optional<double> exp_moment(double lambda) const = 0;
    virtual std::optional<TailClass> tail_class() const = 0;
    virtual std::optional<double> support_radius() const = 0;
    virtual std::string name() const = 0;
};

/// Even dispersal kernel J with its tail mass a(x). Immutable, cheap to copy.
class Kernel {
public:
    explicit Kernel(std::shared_ptr<const KernelModel> model);

    double density(double x) const { return model_->density(x); }
    double operator()(double x) const { return model_->density(x); }
    bool has_tail_mass() const { return model_->has_tail_mass(); }
    double tail_mass(double x) const;
    double tail_integral(double x) const;
    double total_mass() const { return model_->total_mass(); }
    std::optional<double> support_radius() const { return model_->support_radius(); }
    std::string name() const { return model_->name(); }

    /// Stored class for built-ins, numeric probe for user kernels.
    TailClass tail_class() const;
    std::optional<TailClass> stored_tail_class() const { return model_->tail_class(); }

    const KernelModel& model() const { return *model_; }

private:
    std::shared_ptr<const KernelModel> model_;
};

/// J(x) = exp(-|x|) / 2.
Kernel make_laplace();
/// Centered normal density with standard deviation sd.
Kernel make_gaussian(double sd = 1.0);
/// J = 1/(2 radius) on [-radius, radius].
Kernel make_uniform(double radius = 1.0);
/// J(x) proportional to (1 + x^2)^(-sigma_exp); sigma_exp must exceed 1/2.
Kernel make_power(double sigma_exp);
/// Density-only kernel. Usable only after truncate().
Kernel make_user_kernel(std::string name, std::function<double(double)> density,
                        std::optional<double> support_radius = std::nullopt);

/// Kernel J_n = J * xi with xi = 1 on [-R, R], 0 beyond R + ramp.
struct TruncatedKernel {
    Kernel base;
    double cutoff_radius = 0.0;
    double ramp = 0.0;
    double sigma_n = 1.0;  ///< total mass of J_n
    Kernel kernel;         ///< J_n itself, classified CompactSupport
};

/// C^1 monotone cutoff: 1 on [-R, R], 0 outside [-R - ramp, R + ramp].
double cutoff_profile(double x, double R, double ramp);

TruncatedKernel truncate(const Kernel& k, double R, double ramp = 1.0);

/// c(J): integral of a over (-inf, 0]. Quadrature on [-depth, 0] plus the
/// analytic remainder. Throws DivergentIntegral for FatTail kernels.
double c_of_J(const Kernel& k, double truncation_depth = 40.0);

/// Integral of J(x) e^{lambda x}; +inf when it diverges.
double exp_moment(const Kernel& k, double lambda);

/// Quadrature-only exponential moment over growing windows; +inf on divergence.
double exp_moment_numeric(const Kernel& k, double lambda);

TailClass classify_tail(const Kernel& k);

/// Probe-based classification ignoring any stored class. Throws Undecidable.
TailClass classify_tail_numeric(const Kernel& k);

/// Parses `laplace`, `gaussian(sd)`, `uniform(radius)` or `power(sigma)`.
Kernel parse_kernel_spec(const std::string& spec);

}  // namespace frontlab
