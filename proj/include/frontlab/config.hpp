#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "frontlab/cauchy.hpp"
#include "frontlab/errors.hpp"
#include "frontlab/fbsim.hpp"
#include "frontlab/kernel.hpp"
#include "frontlab/reaction.hpp"
#include "frontlab/semiwave.hpp"

namespace frontlab {

/// Every problem found while parsing, one line each.
class ConfigError : public InvalidArgument {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

/// Settings for every subcommand and experiment. Fields mirror the config
/// keys; `explicit_keys` records which "section.key" entries the file set, so
/// experiments can substitute their own defaults for the rest.
struct RunConfig {
    // [model]
    std::string kernel = "laplace";
    std::string reaction = "logistic";
    std::vector<double> reaction_coeffs;  ///< for reaction = custom, constant term first
    double d = 1.0;
    double mu = 1.0;

    // [simulation]
    double h0 = 10.0;
    double T = 200.0;
    double dx = 0.1;
    double sample_dt = 0.5;
    double snap_dt = 0.0;
    std::string u0 = "parabola(1)";
    std::optional<double> v_cap;
    std::optional<double> dt;
    std::string convolution = "auto";

    // [semiwave]
    double c = 1.0;
    double sigma = 0.0;
    std::optional<double> L;
    std::optional<int> n_cells;
    std::optional<double> tol_iter;
    std::optional<int> max_iters;
    std::optional<double> plateau_eps;

    // [speed]
    double tol = 1e-8;
    std::vector<double> mus{1.0, 10.0, 100.0, 1000.0};

    // [cauchy]
    std::optional<double> X;
    std::vector<double> levels{0.5};
    double boundary_eps = 1e-8;

    // [experiment]
    std::string experiment;
    double window = 20.0;
    std::vector<double> radii{10.0, 20.0, 40.0, 80.0};
    double ramp = 1.0;
    std::string heavy_kernel = "power(2)";
    std::string thin_kernel = "laplace";
    std::vector<double> thin_radii{10.0, 20.0, 40.0};
    std::vector<double> compare_mus{1.0, 10.0, 100.0};
    double compare_T = 20.0;
    double vanish_h0 = 0.2;
    double vanish_mu = 0.05;
    double vanish_amplitude = 0.01;
    double vanish_d = 2.0;
    double vanish_dx = 0.01;

    // [output]
    std::string out_dir = "out";
    std::uint64_t seed = 0;

    std::set<std::string> explicit_keys;
    bool is_set(const std::string& section_key) const { return explicit_keys.count(section_key) > 0; }

    Kernel make_kernel() const;
    Reaction make_reaction() const;
    ConvolutionMethod convolution_method() const;
    /// Kernel-dependent defaults overridden by any [semiwave] keys.
    SemiWaveParams semiwave_params(const Kernel& k) const;
    SimConfig sim_config() const;
    CauchyConfig cauchy_config() const;
};

/// Parses the sectioned key = value format. Comments start with '#' or ';'.
/// Throws ConfigError listing every unknown key, duplicate, malformed value
/// and constraint violation.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Comma-separated reals.
std::vector<double> parse_real_list(const std::string& text);

}  // namespace frontlab
