#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "frontlab/cauchy.hpp"
#include "frontlab/config.hpp"
#include "frontlab/errors.hpp"
#include "frontlab/experiments.hpp"
#include "frontlab/fbsim.hpp"
#include "frontlab/kernel.hpp"
#include "frontlab/numerics.hpp"
#include "frontlab/output.hpp"
#include "frontlab/semiwave.hpp"
#include "frontlab/speed.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace frontlab;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNonConvergence = 3;

struct Globals {
    std::string config_path;
    std::string out;
    int threads = 1;
};

RunConfig load(const Globals& g) {
    RunConfig cfg = g.config_path.empty() ? parse_config("") : load_config(g.config_path);
    if (!g.out.empty()) cfg.out_dir = g.out;
    return cfg;
}

void emit(const fs::path& out, const json& summary) {
    write_json(out / "summary.json", summary);
    std::cout << summary.dump(2) << '\n';
}

void write_profile(const fs::path& path, const SemiWaveProfile& p) {
    std::vector<double> x(p.phi.size());
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = p.grid.node(j);
    write_csv(path, {"x", "phi"}, {x, p.phi});
}

int cmd_semiwave(const RunConfig& cfg, std::optional<double> c_opt, std::optional<double> sigma_opt) {
    const Kernel k = cfg.make_kernel();
    const Reaction r = cfg.make_reaction();
    SemiWaveParams params = cfg.semiwave_params(k);
    if (sigma_opt) params.sigma_homotopy = *sigma_opt;
    const double c = c_opt.value_or(cfg.c);
    const SemiWaveResult res = solve_semiwave(c, cfg.d, k, r, params);
    const fs::path out = cfg.out_dir;
    write_profile(out / "profile.csv", res.profile);
    emit(out, {{"c", c},
               {"status", res.accepted() ? "accepted" : "nonexistence"},
               {"residual", res.profile.residual},
               {"plateau", res.profile.plateau_value},
               {"plateau_level", res.profile.plateau_level},
               {"iterations", res.profile.iterations_used},
               {"sigma", res.profile.sigma},
               {"diagnostics", res.diagnostics}});
    return res.accepted() ? kExitPass : kExitFail;
}

int cmd_speed(const RunConfig& cfg, std::optional<double> mu_opt) {
    const Kernel k = cfg.make_kernel();
    const Reaction r = cfg.make_reaction();
    const double mu = mu_opt.value_or(cfg.mu);
    const SpeedSolution sol = solve_c0(mu, cfg.d, k, r, cfg.semiwave_params(k), cfg.tol);
    const fs::path out = cfg.out_dir;
    write_profile(out / "profile.csv", sol.profile);
    emit(out, {{"mu", mu},
               {"c0", sol.c0},
               {"residual", sol.residual},
               {"bracket", {sol.bracket.first, sol.bracket.second}},
               {"evaluations", sol.evaluations}});
    return kExitPass;
}

int cmd_speed_curve(const RunConfig& cfg, const std::string& mus_text, int threads) {
    const Kernel k = cfg.make_kernel();
    const Reaction r = cfg.make_reaction();
    const std::vector<double> mus = mus_text.empty() ? cfg.mus : parse_real_list(mus_text);
    const auto curve = c0_curve(mus, cfg.d, k, r, cfg.semiwave_params(k), cfg.tol, threads);
    std::vector<double> mu, c0, res;
    json entries = json::array();
    bool ok = true;
    for (const auto& e : curve) {
        mu.push_back(e.mu);
        c0.push_back(e.solution ? e.solution->c0 : std::nan(""));
        res.push_back(e.solution ? e.solution->residual : std::nan(""));
        json j = {{"mu", e.mu}};
        if (e.solution) {
            j["c0"] = e.solution->c0;
            j["residual"] = e.solution->residual;
        } else {
            j["error"] = e.error;
            ok = false;
        }
        entries.push_back(j);
    }
    const fs::path out = cfg.out_dir;
    write_csv(out / "c0_curve.csv", {"mu", "c0", "residual"}, {mu, c0, res});
    emit(out, {{"kernel", k.name()}, {"entries", entries}});
    return ok ? kExitPass : kExitNonConvergence;
}

int cmd_simulate(const RunConfig& cfg) {
    const Kernel k = cfg.make_kernel();
    const Reaction r = cfg.make_reaction();
    const SimulationResult res = simulate(cfg.sim_config(), k, r);
    const fs::path out = cfg.out_dir;
    write_csv(out / "trajectory.csv", {"t", "g", "h"},
              {res.trajectory.t, res.trajectory.g, res.trajectory.h});
    write_snapshots(out, res.trajectory.snapshots);
    const Outcome oc = classify_outcome(res.trajectory, res.final_state, cfg.h0);
    json summary = {{"kernel", k.name()},
                    {"outcome", to_string(oc.tag)},
                    {"evidence", oc.evidence},
                    {"span", oc.span},
                    {"core_min", oc.core_min},
                    {"sup_u", oc.sup_u},
                    {"g_T", res.final_state.g},
                    {"h_T", res.final_state.h},
                    {"steps", res.steps},
                    {"dt_min", res.dt_min},
                    {"dt_max", res.dt_max},
                    {"clamp_below", res.stats.clamp_below},
                    {"clamp_above", res.stats.clamp_above},
                    {"max_asymmetry", res.max_asymmetry}};
    try {
        const SpeedMeasurement sp = measure_speed(res.trajectory);
        summary["slope_h"] = sp.slope_h;
        summary["slope_g"] = sp.slope_g;
        summary["dyadic_slopes"] = sp.dyadic_slopes;
    } catch (const InsufficientData& e) {
        summary["slopes_unavailable"] = e.what();
    }
    emit(out, summary);
    return kExitPass;
}

int cmd_cauchy(const RunConfig& cfg) {
    const Kernel k = cfg.make_kernel();
    const Reaction r = cfg.make_reaction();
    const CauchyResult res = cauchy_simulate(cfg.cauchy_config(), k, r);
    const fs::path out = cfg.out_dir;
    json tracks = json::array();
    for (std::size_t i = 0; i < res.tracks.size(); ++i) {
        const LevelSetTrack& tr = res.tracks[i];
        const std::string name = i == 0 ? "levelset.csv" : "levelset_" + std::to_string(i) + ".csv";
        write_csv(out / name, {"t", "x_minus", "x_plus"}, {tr.t, tr.x_minus, tr.x_plus});
        json j = {{"lambda", tr.lambda}, {"file", name}, {"samples", tr.t.size()}};
        if (tr.t.size() >= 4) {
            const std::size_t half = tr.t.size() / 2;
            j["slope_x_plus"] = fit_slope(std::span(tr.t).subspan(half), std::span(tr.x_plus).subspan(half));
        }
        tracks.push_back(j);
    }
    write_snapshots(out, res.snapshots);
    emit(out, {{"kernel", k.name()},
               {"tracks", tracks},
               {"domain_too_small", res.domain_too_small},
               {"boundary_max", res.boundary_max},
               {"clamp_count", res.clamp_count},
               {"steps", res.steps},
               {"dt", res.dt}});
    return kExitPass;
}

int cmd_experiment(const RunConfig& cfg, const std::string& name, int threads) {
    const ExperimentReport rep = run_experiment(name, cfg, cfg.out_dir, threads);
    for (const auto& c : rep.checks) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    }
    if (rep.summary.contains("error")) std::cout << "error: " << rep.summary["error"].get<std::string>() << '\n';
    return rep.exit_code;
}

int cmd_classify(const RunConfig& cfg, const std::string& spec) {
    const Kernel k = parse_kernel_spec(spec.empty() ? cfg.kernel : spec);
    const TailClass tc = classify_tail(k);
    json summary = {{"kernel", k.name()}, {"tail_class", to_string(tc)}};
    if (has_finite_tail_integral(tc)) {
        summary["c_of_J"] = c_of_J(k);
    } else {
        summary["c_of_J"] = "divergent";
    }
    if (auto sr = k.support_radius()) summary["support_radius"] = *sr;
    if (tc == TailClass::ThinTail || tc == TailClass::CompactSupport) {
        if (auto lin = linear_determinacy_speed(cfg.d, k, cfg.make_reaction())) summary["c_star_linear"] = *lin;
    }
    emit(cfg.out_dir, summary);
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonlocal Fisher-KPP free-boundary toolkit"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config_path, "Config file (sectioned key = value)");
    app.add_option("--out", g.out, "Output directory (overrides [output] dir)");
    app.add_option("--threads", g.threads, "Worker threads for sweeps")->check(CLI::PositiveNumber);

    std::optional<double> c_opt, sigma_opt, mu_opt;
    auto* sw = app.add_subcommand("semiwave", "Semi-wave profile at a given speed");
    sw->add_option("--c", c_opt, "Speed");
    sw->add_option("--sigma", sigma_opt, "Boundary value of the perturbed problem");

    auto* sp = app.add_subcommand("speed", "Spreading speed c0 for one mu");
    sp->add_option("--mu", mu_opt, "Boundary coefficient");

    std::string mus_text;
    auto* sc = app.add_subcommand("speed-curve", "c0 over a list of mu values");
    sc->add_option("--mus", mus_text, "Comma-separated mu values");

    auto* sim = app.add_subcommand("simulate", "Free-boundary simulation");
    auto* cy = app.add_subcommand("cauchy", "Whole-line simulation with level-set tracking");

    std::string exp_name;
    auto* ex = app.add_subcommand("experiment", "Run a named experiment");
    ex->add_option("name", exp_name, "Experiment name")->required()->check(CLI::IsMember(experiment_names()));

    std::string kernel_spec;
    auto* ck = app.add_subcommand("classify-kernel", "Tail class and constants of a kernel");
    ck->add_option("--kernel", kernel_spec, "Kernel spec, e.g. power(2)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        const RunConfig cfg = load(g);
        if (*sw) return cmd_semiwave(cfg, c_opt, sigma_opt);
        if (*sp) return cmd_speed(cfg, mu_opt);
        if (*sc) return cmd_speed_curve(cfg, mus_text, g.threads);
        if (*sim) return cmd_simulate(cfg);
        if (*cy) return cmd_cauchy(cfg);
        if (*ex) return cmd_experiment(cfg, exp_name, g.threads);
        if (*ck) return cmd_classify(cfg, kernel_spec);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kExitConfig;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NonConvergence& e) {
        std::cerr << "nonconvergence: " << e.what() << '\n';
        return kExitNonConvergence;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    }
    return kExitFail;
}
