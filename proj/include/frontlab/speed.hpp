#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frontlab/kernel.hpp"
#include "frontlab/reaction.hpp"
#include "frontlab/semiwave.hpp"

namespace frontlab {

/// mu * integral over x < 0 of a(x) phi(x): trapezoid on the profile grid plus
/// the plateau level times the analytic tail integral beyond -L.
double flux_M(const SemiWaveProfile& p, const Kernel& k, double mu);

struct SpeedSolution {
    double c0 = 0.0;
    double mu = 0.0;
    double residual = 0.0;  ///< |c0 - mu M(c0)|
    std::pair<double, double> bracket{0.0, 0.0};
    SemiWaveProfile profile;
    int evaluations = 0;  ///< semi-wave solves spent
};

/// Root of G(c) = c - M(c) by bisection. The bracket grows geometrically from
/// min(0.1, mu c(J) / 10). Speeds without a semi-wave count as G(c) = c > 0.
/// When the root sits on the edge of the accepted region the domain depth is
/// doubled (up to 16 times the given L) and the solve repeated.
SpeedSolution solve_c0(double mu, double d, const Kernel& k, const Reaction& r,
                       const SemiWaveParams& params, double tol = 1e-8);

struct SpeedCurveEntry {
    double mu = 0.0;
    std::optional<SpeedSolution> solution;
    std::string error;
};

/// One solve_c0 per mu, in order. Failures are recorded per entry. With
/// threads > 1 the entries are distributed over worker threads.
std::vector<SpeedCurveEntry> c0_curve(const std::vector<double>& mus, double d, const Kernel& k,
                                      const Reaction& r, const SemiWaveParams& params,
                                      double tol = 1e-8, int threads = 1);

}  // namespace frontlab
