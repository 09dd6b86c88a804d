#include "frontlab/experiments.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <future>

#include "frontlab/cauchy.hpp"
#include "frontlab/errors.hpp"
#include "frontlab/fbsim.hpp"
#include "frontlab/output.hpp"
#include "frontlab/speed.hpp"

namespace frontlab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

struct Checks {
    ExperimentReport& rep;
    void add(const std::string& name, bool pass, const std::string& detail) {
        rep.checks.push_back({name, pass, detail});
    }
};

void write_trajectory(const fs::path& path, const FrontTrajectory& traj) {
    write_csv(path, {"t", "g", "h"}, {traj.t, traj.g, traj.h});
}

void write_profile(const fs::path& path, const SemiWaveProfile& p) {
    std::vector<double> x(p.phi.size());
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = p.grid.node(j);
    write_csv(path, {"x", "phi"}, {x, p.phi});
}

void write_curve(const fs::path& path, const std::vector<SpeedCurveEntry>& curve) {
    std::vector<double> mu, c0, res;
    for (const auto& e : curve) {
        mu.push_back(e.mu);
        c0.push_back(e.solution ? e.solution->c0 : std::nan(""));
        res.push_back(e.solution ? e.solution->residual : std::nan(""));
    }
    write_csv(path, {"mu", "c0", "residual"}, {mu, c0, res});
}

json outcome_json(const Outcome& o) {
    return {{"tag", to_string(o.tag)},     {"span", o.span},
            {"core_min", o.core_min},      {"sup_u", o.sup_u},
            {"front_speed", o.front_speed}, {"evidence", o.evidence}};
}

json sim_json(const SimulationResult& res) {
    return {{"h_T", res.final_state.h},
            {"g_T", res.final_state.g},
            {"steps", res.steps},
            {"dt_min", res.dt_min},
            {"dt_max", res.dt_max},
            {"clamp_below", res.stats.clamp_below},
            {"clamp_above", res.stats.clamp_above},
            {"max_asymmetry", res.max_asymmetry}};
}

bool strictly_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > v[i - 1])) return false;
    }
    return !v.empty();
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] < v[i - 1])) return false;
    }
    return !v.empty();
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt("%.6g", v[i]);
    return s;
}

void linear_speed(const RunConfig& cfg, const fs::path& out, Checks& ck) {
    const Kernel k = cfg.make_kernel();
    const Reaction r = cfg.make_reaction();
    const SpeedSolution sol = solve_c0(cfg.mu, cfg.d, k, r, cfg.semiwave_params(k), cfg.tol);
    write_profile(out / "profile.csv", sol.profile);

    const double bound = cfg.mu * c_of_J(k);
    ck.add("c0_bounds", sol.c0 > 0.0 && sol.c0 < bound, fmt("c0 = %.8g, mu c(J) = %.8g", sol.c0, bound));
    ck.add("c0_residual", sol.residual <= cfg.tol, fmt("|G(c0)| = %.3g", sol.residual));

    const SimulationResult res = simulate(cfg.sim_config(), k, r);
    write_trajectory(out / "trajectory.csv", res.trajectory);
    write_snapshots(out, res.trajectory.snapshots);
    const SpeedMeasurement sp = measure_speed(res.trajectory);
    const Outcome oc = classify_outcome(res.trajectory, res.final_state, cfg.h0);

    const double rel = std::abs(sp.slope_h - sol.c0) / sol.c0;
    ck.add("slope_within_10pct", rel <= 0.10,
           fmt("slope_h = %.6g vs c0 = %.6g (relative gap %.3g)", sp.slope_h, sol.c0, rel));
    ck.add("symmetry", res.max_asymmetry < 1e-10, fmt("max |g + h| = %.3g", res.max_asymmetry));
    ck.add("no_clamping", res.stats.clamp_below == 0 && res.stats.clamp_above == 0,
           fmt("below %ld, above %ld", res.stats.clamp_below, res.stats.clamp_above));
    ck.add("spreading", oc.tag == OutcomeTag::Spreading, oc.evidence);

    ck.rep.summary["c0"] = sol.c0;
    ck.rep.summary["c0_residual"] = sol.residual;
    ck.rep.summary["bracket"] = {sol.bracket.first, sol.bracket.second};
    ck.rep.summary["slope_h"] = sp.slope_h;
    ck.rep.summary["slope_g"] = sp.slope_g;
    ck.rep.summary["simulation"] = sim_json(res);
    ck.rep.summary["outcome"] = outcome_json(oc);
}

void accelerated(const RunConfig& cfg, const fs::path& out, Checks& ck) {
    const Kernel k = parse_kernel_spec(cfg.is_set("model.kernel") ? cfg.kernel : "power(0.8)");
    const Reaction r = cfg.make_reaction();
    SimConfig sc = cfg.sim_config();
    if (!cfg.is_set("simulation.dx")) sc.dx = 0.5;

    bool no_speed = false;
    std::string why;
    try {
        (void)solve_c0(cfg.mu, cfg.d, k, r, cfg.semiwave_params(k), cfg.tol);
        why = "solve_c0 returned a finite speed";
    } catch (const NoFiniteSpeed& e) {
        no_speed = true;
        why = e.what();
    }
    ck.add("no_finite_speed", no_speed, why);

    const SimulationResult res = simulate(sc, k, r);
    write_trajectory(out / "trajectory.csv", res.trajectory);
    write_snapshots(out, res.trajectory.snapshots);
    const SpeedMeasurement sp = measure_speed(res.trajectory);
    std::vector<double> t0, t1;
    for (const auto& [a, b] : sp.windows) {
        t0.push_back(a);
        t1.push_back(b);
    }
    write_csv(out / "dyadic_slopes.csv", {"t_start", "t_end", "slope"}, {t0, t1, sp.dyadic_slopes});

    const auto& s = sp.dyadic_slopes;
    ck.add("dyadic_slopes_increasing", strictly_increasing(s), "slopes: " + join(s));
    const double ratio = s.empty() ? 0.0 : s.back() / s.front();
    ck.add("slope_ratio_at_least_2", ratio >= 2.0, fmt("final/first = %.6g", ratio));

    ck.rep.summary["kernel"] = k.name();
    ck.rep.summary["tail_class"] = to_string(k.tail_class());
    ck.rep.summary["dyadic_slopes"] = s;
    ck.rep.summary["simulation"] = sim_json(res);
}

void dichotomy(const RunConfig& cfg, const fs::path& out, Checks& ck) {
    const Kernel k = cfg.make_kernel();
    const Reaction r = cfg.make_reaction();

    const SimConfig spread = cfg.sim_config();
    SimConfig half = spread;
    half.u0.amplitude *= 0.5;
    SimConfig vanish = spread;
    vanish.h0 = cfg.vanish_h0;
    vanish.mu = cfg.vanish_mu;
    vanish.d = cfg.vanish_d;
    vanish.dx = cfg.vanish_dx;
    vanish.u0.amplitude = cfg.vanish_amplitude;

    struct Case {
        const char* name;
        const SimConfig* sc;
        OutcomeTag expected;
    };
    const Case cases[] = {{"spreading", &spread, OutcomeTag::Spreading},
                          {"half_amplitude", &half, OutcomeTag::Spreading},
                          {"vanishing", &vanish, OutcomeTag::Vanishing}};
    for (const auto& c : cases) {
        const SimulationResult res = simulate(*c.sc, k, r);
        write_trajectory(out / (std::string("trajectory_") + c.name + ".csv"), res.trajectory);
        const Outcome oc = classify_outcome(res.trajectory, res.final_state, c.sc->h0);
        ck.add(std::string(c.name) + "_outcome", oc.tag == c.expected,
               "expected " + to_string(c.expected) + ", got " + to_string(oc.tag) + ": " + oc.evidence);
        json j = sim_json(res);
        j["outcome"] = outcome_json(oc);
        ck.rep.summary[c.name] = j;
    }

    // Vanishing needs a negative principal eigenvalue on the initial range.
    const double lp = principal_eigenvalue(cfg.vanish_h0, cfg.vanish_d, k, r.df0());
    ck.add("vanishing_set_eigenvalue_negative", lp < 0.0, fmt("lambda_p = %.6g", lp));
    ck.rep.summary["vanishing_lambda_p"] = lp;
}

void mu_limit(const RunConfig& cfg, const fs::path& out, int threads, Checks& ck) {
    const Kernel k = cfg.make_kernel();
    const Reaction r = cfg.make_reaction();

    MuLimitConfig mc;
    mc.base = cfg.sim_config();
    mc.base.T = cfg.compare_T;
    mc.window = cfg.window;
    mc.X = cfg.X.value_or(100.0);
    mc.dt = cfg.dt;
    const MuLimitReport rep = compare_mu_limit(cfg.compare_mus, mc, k, r);

    std::vector<double> mu, excess, diff, gT, hT;
    for (const auto& e : rep.entries) {
        mu.push_back(e.mu);
        excess.push_back(e.excess);
        diff.push_back(e.abs_diff);
        gT.push_back(e.g_T);
        hT.push_back(e.h_T);
    }
    write_csv(out / "mu_limit.csv", {"mu", "excess", "abs_diff", "g_T", "h_T"}, {mu, excess, diff, gT, hT});
    double worst = 0.0;
    for (double e : excess) worst = std::max(worst, e);
    ck.add("one_sided_excess", worst <= 5e-3, fmt("max excess = %.3g", worst));
    ck.add("abs_diff_decreasing", strictly_decreasing(diff), "sup |u_mu - u_*|: " + join(diff));
    ck.add("h_T_increasing", strictly_increasing(hT), "h(T): " + join(hT));
    ck.add("whole_line_domain", !rep.domain_too_small, fmt("X = %.6g", rep.X));

    // Speed curves: thin kernel approaches c_*, heavy kernel keeps growing.
    const Kernel heavy = parse_kernel_spec(cfg.heavy_kernel);
    auto heavy_job = [&] {
        return c0_curve(cfg.mus, cfg.d, heavy, r, cfg.semiwave_params(heavy), cfg.tol, 1);
    };
    std::future<std::vector<SpeedCurveEntry>> heavy_future;
    if (threads > 1) heavy_future = std::async(std::launch::async, heavy_job);
    const auto thin = c0_curve(cfg.mus, cfg.d, k, r, cfg.semiwave_params(k), cfg.tol,
                               threads > 1 ? threads - 1 : 1);
    const auto heavy_curve = threads > 1 ? heavy_future.get() : heavy_job();
    write_curve(out / "c0_curve.csv", thin);
    write_curve(out / "c0_curve_heavy.csv", heavy_curve);

    auto values = [](const std::vector<SpeedCurveEntry>& c) {
        std::vector<double> v;
        for (const auto& e : c) {
            if (!e.solution) throw NonConvergence("c0 at mu = " + fmt("%g", e.mu) + ": " + e.error);
            v.push_back(e.solution->c0);
        }
        return v;
    };
    const auto c_thin = values(thin);
    const auto c_heavy = values(heavy_curve);
    ck.add("c0_increasing", strictly_increasing(c_thin), "c0: " + join(c_thin));

    if (k.tail_class() == TailClass::ThinTail || k.tail_class() == TailClass::CompactSupport) {
        const CStarEstimate cs = estimate_cstar(cfg.d, k, r, default_cstar_params(k), 1e-3);
        std::vector<double> gap;
        for (double c : c_thin) gap.push_back(cs.c_star - c);
        bool below = true;
        for (double g : gap) below = below && g > 0.0;
        ck.add("gap_to_cstar_decreasing", below && strictly_decreasing(gap),
               fmt("c_* = %.6g, gaps: ", cs.c_star) + join(gap));
        ck.rep.summary["c_star"] = cs.c_star;
        if (cs.c_linear) ck.rep.summary["c_star_linear"] = *cs.c_linear;
    }

    ck.add("heavy_c0_increasing", strictly_increasing(c_heavy), "c0: " + join(c_heavy));
    const double ratio = c_heavy.back() / c_heavy.front();
    ck.add("heavy_ratio_above_2", ratio > 2.0, fmt("last/first = %.6g", ratio));
    bool spread_out = true;
    for (std::size_t i = 1; i < c_heavy.size(); ++i) {
        spread_out = spread_out && std::abs(c_heavy[i] - c_heavy[i - 1]) > 0.01 * c_heavy[i - 1];
    }
    ck.add("heavy_no_plateau", spread_out, "consecutive values differ by more than 1%");

    ck.rep.summary["mu_limit"] = {{"mus", mu},      {"excess", excess}, {"abs_diff", diff},
                                  {"h_T", hT},      {"dt", rep.dt},     {"steps", rep.steps},
                                  {"X", rep.X}};
    ck.rep.summary["c0_thin"] = c_thin;
    ck.rep.summary["c0_heavy"] = c_heavy;
}

void write_truncation(const fs::path& path, const std::vector<TruncatedSpeed>& seq) {
    std::vector<double> R, s, eta, c;
    for (const auto& e : seq) {
        R.push_back(e.R);
        s.push_back(e.sigma_n);
        eta.push_back(e.eta_n);
        c.push_back(e.c_n.value_or(std::nan("")));
    }
    write_csv(path, {"R", "sigma_n", "eta_n", "c_n"}, {R, s, eta, c});
}

std::vector<double> speeds(const std::vector<TruncatedSpeed>& seq) {
    std::vector<double> v;
    for (const auto& e : seq) {
        if (!e.c_n) throw NonConvergence("c_n at R = " + fmt("%g", e.R) + ": " + e.error);
        v.push_back(*e.c_n);
    }
    return v;
}

void truncation(const RunConfig& cfg, const fs::path& out, int threads, Checks& ck) {
    const Kernel fat = parse_kernel_spec(cfg.is_set("model.kernel") ? cfg.kernel : "power(0.8)");
    const Kernel thin = parse_kernel_spec(cfg.thin_kernel);
    const Reaction r = cfg.make_reaction();

    auto thin_job = [&] {
        auto seq = truncated_speed_sequence(thin, cfg.thin_radii, cfg.d, cfg.mu, r, cfg.ramp, cfg.tol);
        auto full = solve_c0(cfg.mu, cfg.d, thin, r, cfg.semiwave_params(thin), cfg.tol);
        return std::make_pair(std::move(seq), full.c0);
    };
    std::future<std::pair<std::vector<TruncatedSpeed>, double>> thin_future;
    if (threads > 1) thin_future = std::async(std::launch::async, thin_job);
    const auto fat_seq = truncated_speed_sequence(fat, cfg.radii, cfg.d, cfg.mu, r, cfg.ramp, cfg.tol);
    const auto [thin_seq, c_full] = threads > 1 ? thin_future.get() : thin_job();
    write_truncation(out / "truncation.csv", fat_seq);
    write_truncation(out / "truncation_thin.csv", thin_seq);

    const auto c = speeds(fat_seq);
    bool nondecreasing = true;
    for (std::size_t i = 1; i < c.size(); ++i) nondecreasing = nondecreasing && c[i] >= c[i - 1] - 10.0 * cfg.tol;
    ck.add("c_n_nondecreasing", nondecreasing, "c_n: " + join(c));
    const double ratio = c.back() / c.front();
    ck.add("c_n_ratio_above_2", ratio > 2.0, fmt("c(R_last)/c(R_first) = %.6g", ratio));

    const auto ct = speeds(thin_seq);
    const double rel = std::abs(ct.back() - c_full) / c_full;
    ck.add("thin_limit_within_5pct", rel <= 0.05,
           fmt("c_n(R = %g) = %.6g vs c0 = %.6g (relative gap %.3g)", cfg.thin_radii.back(), ct.back(),
               c_full, rel));

    ck.rep.summary["kernel"] = fat.name();
    ck.rep.summary["c_n"] = c;
    ck.rep.summary["thin_kernel"] = thin.name();
    ck.rep.summary["thin_c_n"] = ct;
    ck.rep.summary["thin_c0"] = c_full;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"linear-speed", "accelerated", "dichotomy", "mu-limit",
                                                "truncation"};
    return names;
}

ExperimentReport run_experiment(const std::string& name, const RunConfig& cfg, const fs::path& out_dir,
                                int threads) {
    ExperimentReport rep;
    rep.name = name;
    rep.summary = json::object();
    Checks ck{rep};
    try {
        if (name == "linear-speed") {
            linear_speed(cfg, out_dir, ck);
        } else if (name == "accelerated") {
            accelerated(cfg, out_dir, ck);
        } else if (name == "dichotomy") {
            dichotomy(cfg, out_dir, ck);
        } else if (name == "mu-limit") {
            mu_limit(cfg, out_dir, threads, ck);
        } else if (name == "truncation") {
            truncation(cfg, out_dir, threads, ck);
        } else {
            throw InvalidArgument("unknown experiment '" + name + "'");
        }
        rep.exit_code = 0;
        for (const auto& c : rep.checks) {
            if (!c.pass) rep.exit_code = 1;
        }
    } catch (const NonConvergence& e) {
        rep.exit_code = 3;
        rep.summary["error"] = e.what();
    } catch (const InvalidArgument&) {
        throw;
    } catch (const Error& e) {
        rep.exit_code = 1;
        rep.checks.push_back({"completed", false, e.what()});
    }

    json checks = json::array();
    for (const auto& c : rep.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    rep.summary["experiment"] = name;
    rep.summary["checks"] = checks;
    rep.summary["pass"] = rep.exit_code == 0;
    rep.summary["exit_code"] = rep.exit_code;
    write_json(out_dir / "summary.json", rep.summary);
    return rep;
}

}  // namespace frontlab
