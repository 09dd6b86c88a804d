#include "frontlab/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace frontlab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& text) {
    const std::string t = trim(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        throw InvalidArgument("'" + t + "' is not a number");
    }
    if (used != t.size() || !std::isfinite(v)) throw InvalidArgument("'" + t + "' is not a number");
    return v;
}

long long parse_integer(const std::string& text) {
    const std::string t = trim(text);
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(t, &used);
    } catch (const std::exception&) {
        throw InvalidArgument("'" + t + "' is not an integer");
    }
    if (used != t.size()) throw InvalidArgument("'" + t + "' is not an integer");
    return v;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

Setter real(double RunConfig::*field) {
    return [field](RunConfig& c, const std::string& v) { c.*field = parse_real(v); };
}
Setter opt_real(std::optional<double> RunConfig::*field) {
    return [field](RunConfig& c, const std::string& v) { c.*field = parse_real(v); };
}
Setter opt_int(std::optional<int> RunConfig::*field) {
    return [field](RunConfig& c, const std::string& v) {
        const long long n = parse_integer(v);
        if (n < INT32_MIN || n > INT32_MAX) throw InvalidArgument("integer out of range");
        c.*field = static_cast<int>(n);
    };
}
Setter text(std::string RunConfig::*field) {
    return [field](RunConfig& c, const std::string& v) {
        if (v.empty()) throw InvalidArgument("empty value");
        c.*field = v;
    };
}
Setter list(std::vector<double> RunConfig::*field) {
    return [field](RunConfig& c, const std::string& v) { c.*field = parse_real_list(v); };
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"model.kernel", text(&RunConfig::kernel)},
        {"model.reaction", text(&RunConfig::reaction)},
        {"model.reaction_coeffs", list(&RunConfig::reaction_coeffs)},
        {"model.d", real(&RunConfig::d)},
        {"model.mu", real(&RunConfig::mu)},
        {"simulation.h0", real(&RunConfig::h0)},
        {"simulation.T", real(&RunConfig::T)},
        {"simulation.dx", real(&RunConfig::dx)},
        {"simulation.sample_dt", real(&RunConfig::sample_dt)},
        {"simulation.snap_dt", real(&RunConfig::snap_dt)},
        {"simulation.u0", text(&RunConfig::u0)},
        {"simulation.v_cap", opt_real(&RunConfig::v_cap)},
        {"simulation.dt", opt_real(&RunConfig::dt)},
        {"simulation.convolution", text(&RunConfig::convolution)},
        {"semiwave.c", real(&RunConfig::c)},
        {"semiwave.sigma", real(&RunConfig::sigma)},
        {"semiwave.L", opt_real(&RunConfig::L)},
        {"semiwave.n_cells", opt_int(&RunConfig::n_cells)},
        {"semiwave.tol_iter", opt_real(&RunConfig::tol_iter)},
        {"semiwave.max_iters", opt_int(&RunConfig::max_iters)},
        {"semiwave.plateau_eps", opt_real(&RunConfig::plateau_eps)},
        {"speed.tol", real(&RunConfig::tol)},
        {"speed.mus", list(&RunConfig::mus)},
        {"cauchy.X", opt_real(&RunConfig::X)},
        {"cauchy.levels", list(&RunConfig::levels)},
        {"cauchy.boundary_eps", real(&RunConfig::boundary_eps)},
        {"experiment.name", text(&RunConfig::experiment)},
        {"experiment.window", real(&RunConfig::window)},
        {"experiment.radii", list(&RunConfig::radii)},
        {"experiment.ramp", real(&RunConfig::ramp)},
        {"experiment.heavy_kernel", text(&RunConfig::heavy_kernel)},
        {"experiment.thin_kernel", text(&RunConfig::thin_kernel)},
        {"experiment.thin_radii", list(&RunConfig::thin_radii)},
        {"experiment.compare_mus", list(&RunConfig::compare_mus)},
        {"experiment.compare_T", real(&RunConfig::compare_T)},
        {"experiment.vanish_h0", real(&RunConfig::vanish_h0)},
        {"experiment.vanish_mu", real(&RunConfig::vanish_mu)},
        {"experiment.vanish_amplitude", real(&RunConfig::vanish_amplitude)},
        {"experiment.vanish_d", real(&RunConfig::vanish_d)},
        {"experiment.vanish_dx", real(&RunConfig::vanish_dx)},
        {"output.dir", text(&RunConfig::out_dir)},
        {"output.seed",
         [](RunConfig& c, const std::string& v) {
             const long long n = parse_integer(v);
             if (n < 0) throw InvalidArgument("seed must be >= 0");
             c.seed = static_cast<std::uint64_t>(n);
         }},
    };
    return table;
}

const char* const kExperiments[] = {"linear-speed", "accelerated", "dichotomy", "mu-limit",
                                    "truncation"};

void check_constraints(const RunConfig& c, std::vector<std::string>& bad) {
    auto positive = [&bad](const char* key, double v) {
        if (!(v > 0.0)) bad.push_back(std::string(key) + ": must be > 0");
    };
    auto positive_list = [&bad](const char* key, const std::vector<double>& v, bool increasing) {
        if (v.empty()) bad.push_back(std::string(key) + ": must not be empty");
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!(v[i] > 0.0)) {
                bad.push_back(std::string(key) + ": entries must be > 0");
                return;
            }
            if (increasing && i > 0 && !(v[i] > v[i - 1])) {
                bad.push_back(std::string(key) + ": entries must be strictly increasing");
                return;
            }
        }
    };
    positive("model.d", c.d);
    positive("model.mu", c.mu);
    positive("simulation.h0", c.h0);
    positive("simulation.T", c.T);
    positive("simulation.dx", c.dx);
    if (c.dx > 0.0 && c.h0 > 0.0 && !(c.dx < c.h0)) bad.push_back("simulation.dx: must be < h0");
    positive("simulation.sample_dt", c.sample_dt);
    if (!(c.snap_dt >= 0.0)) bad.push_back("simulation.snap_dt: must be >= 0");
    if (c.v_cap) positive("simulation.v_cap", *c.v_cap);
    if (c.dt) positive("simulation.dt", *c.dt);
    if (c.convolution != "auto" && c.convolution != "direct" && c.convolution != "fft") {
        bad.push_back("simulation.convolution: must be auto, direct or fft");
    }
    positive("semiwave.c", c.c);
    if (!(c.sigma >= 0.0 && c.sigma < 1.0)) bad.push_back("semiwave.sigma: must lie in [0, 1)");
    if (c.L) positive("semiwave.L", *c.L);
    if (c.n_cells && *c.n_cells < 100) bad.push_back("semiwave.n_cells: must be >= 100");
    if (c.tol_iter) positive("semiwave.tol_iter", *c.tol_iter);
    if (c.max_iters && *c.max_iters < 1) bad.push_back("semiwave.max_iters: must be >= 1");
    if (c.plateau_eps && !(*c.plateau_eps > 0.0 && *c.plateau_eps < 0.1)) {
        bad.push_back("semiwave.plateau_eps: must lie in (0, 0.1)");
    }
    positive("speed.tol", c.tol);
    positive_list("speed.mus", c.mus, true);
    if (c.X && !(*c.X > 0.0)) bad.push_back("cauchy.X: must be > 0");
    for (double l : c.levels) {
        if (!(l > 0.0 && l < 1.0)) {
            bad.push_back("cauchy.levels: entries must lie in (0, 1)");
            break;
        }
    }
    positive("cauchy.boundary_eps", c.boundary_eps);
    if (!c.experiment.empty()) {
        bool known = false;
        for (const char* e : kExperiments) known = known || c.experiment == e;
        if (!known) bad.push_back("experiment.name: unknown experiment '" + c.experiment + "'");
    }
    positive("experiment.window", c.window);
    positive_list("experiment.radii", c.radii, true);
    positive("experiment.ramp", c.ramp);
    positive_list("experiment.thin_radii", c.thin_radii, true);
    positive_list("experiment.compare_mus", c.compare_mus, true);
    positive("experiment.compare_T", c.compare_T);
    positive("experiment.vanish_h0", c.vanish_h0);
    positive("experiment.vanish_mu", c.vanish_mu);
    positive("experiment.vanish_amplitude", c.vanish_amplitude);
    positive("experiment.vanish_d", c.vanish_d);
    positive("experiment.vanish_dx", c.vanish_dx);

    // Names must resolve.
    auto try_kernel = [&bad](const char* key, const std::string& spec) {
        try {
            (void)parse_kernel_spec(spec);
        } catch (const std::exception& e) {
            bad.push_back(std::string(key) + ": " + e.what());
        }
    };
    try_kernel("model.kernel", c.kernel);
    try_kernel("experiment.heavy_kernel", c.heavy_kernel);
    try_kernel("experiment.thin_kernel", c.thin_kernel);
    if (c.reaction == "custom") {
        if (c.reaction_coeffs.empty()) bad.push_back("model.reaction_coeffs: required for reaction = custom");
    } else if (c.reaction != "logistic") {
        bad.push_back("model.reaction: must be logistic or custom");
    } else if (!c.reaction_coeffs.empty()) {
        bad.push_back("model.reaction_coeffs: only valid with reaction = custom");
    }
    try {
        (void)parse_initial_data(c.u0);
    } catch (const std::exception& e) {
        bad.push_back(std::string("simulation.u0: ") + e.what());
    }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : InvalidArgument([&problems] {
          std::string msg = "configuration error";
          for (const auto& p : problems) msg += "\n  " + p;
          return msg;
      }()),
      problems_(std::move(problems)) {}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(item));
    if (out.empty()) throw InvalidArgument("empty list");
    return out;
}

RunConfig parse_config(const std::string& content) {
    RunConfig cfg;
    std::vector<std::string> bad;
    std::string section;
    std::istringstream in(content);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find_first_of("#;");
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') {
                bad.push_back(where + "malformed section header");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            bad.push_back(where + "expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string full = section.empty() ? key : section + "." + key;
        const auto it = setters().find(full);
        if (it == setters().end()) {
            bad.push_back(where + "unknown key '" + full + "'");
            continue;
        }
        if (!cfg.explicit_keys.insert(full).second) {
            bad.push_back(where + "duplicate key '" + full + "'");
            continue;
        }
        try {
            it->second(cfg, value);
        } catch (const std::exception& e) {
            bad.push_back(where + full + ": " + e.what());
        }
    }
    check_constraints(cfg, bad);
    if (!bad.empty()) throw ConfigError(std::move(bad));
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError({"cannot read config file '" + path + "'"});
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

Kernel RunConfig::make_kernel() const { return parse_kernel_spec(kernel); }

Reaction RunConfig::make_reaction() const {
    if (reaction == "custom") return make_polynomial(reaction_coeffs);
    return make_logistic();
}

ConvolutionMethod RunConfig::convolution_method() const {
    if (convolution == "direct") return ConvolutionMethod::Direct;
    if (convolution == "fft") return ConvolutionMethod::Fft;
    return ConvolutionMethod::Auto;
}

SemiWaveParams RunConfig::semiwave_params(const Kernel& k) const {
    SemiWaveParams p = default_semiwave_params(k);
    if (L) {
        const double h = p.L / p.n_cells;
        p.L = *L;
        p.n_cells = static_cast<int>(std::lround(*L / h));
    }
    if (n_cells) p.n_cells = *n_cells;
    if (tol_iter) p.tol_iter = *tol_iter;
    if (max_iters) p.max_iters = *max_iters;
    if (plateau_eps) p.plateau_eps = *plateau_eps;
    p.sigma_homotopy = sigma;
    p.convolution = convolution_method();
    p.validate();
    return p;
}

SimConfig RunConfig::sim_config() const {
    SimConfig s;
    s.d = d;
    s.mu = mu;
    s.h0 = h0;
    s.T = T;
    s.dx = dx;
    s.sample_dt = sample_dt;
    s.snap_dt = snap_dt;
    s.u0 = parse_initial_data(u0);
    s.v_cap = v_cap;
    s.dt = dt;
    s.convolution = convolution_method();
    return s;
}

CauchyConfig RunConfig::cauchy_config() const {
    CauchyConfig cc;
    cc.d = d;
    cc.h0 = h0;
    cc.T = T;
    cc.dx = dx;
    cc.X = X.value_or(0.0);
    cc.sample_dt = sample_dt;
    cc.snap_dt = snap_dt;
    cc.u0 = parse_initial_data(u0);
    cc.levels = levels;
    cc.boundary_eps = boundary_eps;
    cc.dt = dt;
    cc.convolution = convolution_method();
    return cc;
}

}  // namespace frontlab
