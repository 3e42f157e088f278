#include "skg/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace skg {

using nlohmann::json;

RunKind kind_from_string(const std::string& s) {
    if (s == "renorm_scan") return RunKind::renorm_scan;
    if (s == "classical_run") return RunKind::classical_run;
    if (s == "dress_check") return RunKind::dress_check;
    if (s == "quantum_correspond") return RunKind::quantum_correspond;
    if (s == "verify_all") return RunKind::verify_all;
    throw ConfigError("kind: unknown experiment \"" + s + "\"");
}

std::string to_string(RunKind k) {
    switch (k) {
        case RunKind::renorm_scan: return "renorm_scan";
        case RunKind::classical_run: return "classical_run";
        case RunKind::dress_check: return "dress_check";
        case RunKind::quantum_correspond: return "quantum_correspond";
        case RunKind::verify_all: return "verify_all";
    }
    throw ConfigError("kind: invalid enum value");
}

namespace {

void reject_unknown(const json& j, const std::string& path,
                    const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    for (const auto& [key, value] : j.items())
        if (allowed.find(key) == allowed.end())
            throw ConfigError(path + "." + key + ": unknown key");
}

double get_num(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path + ": expected a number");
    return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError(path + ": expected an integer");
    return j.get<int>();
}

bool get_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) throw ConfigError(path + ": expected a boolean");
    return j.get<bool>();
}

std::string get_str(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path + ": expected a string");
    return j.get<std::string>();
}

dvec get_dvec(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path + ": expected an array of numbers");
    dvec out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(get_num(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<std::size_t> get_indexvec(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path + ": expected an array of indices");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        const int v = get_int(j[i], p);
        if (v < 0) throw ConfigError(p + ": must be nonnegative");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

cvec get_cvec(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path + ": expected an array of [re, im] pairs");
    cvec out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        if (!j[i].is_array() || j[i].size() != 2)
            throw ConfigError(p + ": expected an [re, im] pair");
        out.emplace_back(get_num(j[i][0], p + "[0]"), get_num(j[i][1], p + "[1]"));
    }
    return out;
}

dvec default_sigma_list() {
    dvec s;
    for (int i = 0; i < 16; ++i) s.push_back(std::pow(10.0, 1.0 + 3.0 * i / 15.0));
    return s;
}

void validate(RunConfig& c) {
    if (c.dim < 1 || c.dim > 3) throw ConfigError("grid.dim: must be 1, 2, or 3");
    if (c.n < 8 || (c.n & (c.n - 1)) != 0)
        throw ConfigError("grid.n: must be a power of two >= 8");
    if (!(c.L > 0.0)) throw ConfigError("grid.L: must be positive");

    std::size_t npts = 1;
    for (int a = 0; a < c.dim; ++a) npts *= static_cast<std::size_t>(c.n);
    if (c.n_nuc < 1) throw ConfigError("modes.n_nuc: must be >= 1");
    for (std::size_t idx : c.meson_nodes)
        if (idx >= npts) throw ConfigError("modes.meson_nodes: index beyond grid size");
    if (c.mode_basis != "harmonic" && c.mode_basis != "plane_waves")
        throw ConfigError("modes.basis: must be \"harmonic\" or \"plane_waves\"");
    if (c.mode_basis == "harmonic" && c.dim != 1)
        throw ConfigError("modes.basis: harmonic basis requires grid.dim = 1");

    if (c.potential != "zero" && c.potential != "harmonic")
        throw ConfigError("potential.kind: must be \"zero\" or \"harmonic\"");
    if (!(c.omega_trap > 0.0)) throw ConfigError("potential.omega_trap: must be positive");

    if (!(c.renorm.M > 0.0)) throw ConfigError("physics.M: must be positive");
    if (!(c.renorm.m0 > 0.0)) throw ConfigError("physics.m0: must be positive");
    if (!(c.renorm.sigma0 >= 0.0)) throw ConfigError("physics.sigma0: must be >= 0");
    if (c.renorm.d < 1 || c.renorm.d > 3) throw ConfigError("physics.d: must be 1, 2, or 3");
    if (c.kind != RunKind::renorm_scan && c.renorm.d != c.dim)
        throw ConfigError("physics.d: must match grid.dim for grid experiments");

    for (double s : c.sigma_list)
        if (!(s > c.renorm.sigma0)) throw ConfigError("sigma_list: sigma must exceed sigma0");

    if (!(c.flow.dt > 0.0)) throw ConfigError("flow.dt: must be positive");
    if (!(c.flow.t_final >= 0.0)) throw ConfigError("flow.t_final: must be >= 0");
    if (!(c.flow.energy_jump_tol > 0.0))
        throw ConfigError("flow.energy_jump_tol: must be positive");
    if (c.max_rows < 2) throw ConfigError("classical.max_rows: must be >= 2");
    if (c.dress_states < 1) throw ConfigError("dress.n_states: must be >= 1");

    const std::size_t nmodes = static_cast<std::size_t>(c.n_nuc) + c.meson_nodes.size();
    if (!c.z0.empty() && c.z0.size() != nmodes)
        throw ConfigError("quantum.z0: needs one [re, im] entry per mode");
    if (!c.xi.empty() && c.xi.size() != nmodes)
        throw ConfigError("quantum.xi: needs one [re, im] entry per mode");
    for (double t : c.t_grid)
        if (!(t >= 0.0)) throw ConfigError("quantum.t_grid: times must be >= 0");
    if (c.t_grid.empty()) throw ConfigError("quantum.t_grid: must be nonempty");
    for (double e : c.eps_list)
        if (!(e > 0.0)) throw ConfigError("quantum.eps_list: entries must be positive");
    if (c.eps_list.empty()) throw ConfigError("quantum.eps_list: must be nonempty");
    if (c.n_max < 0) throw ConfigError("quantum.n_max: must be >= 0");
    if (!(c.K > 0.0)) throw ConfigError("quantum.K: must be positive");
    if (!(c.cap_tol > 0.0)) throw ConfigError("quantum.cap_tol: must be positive");

    if (c.out_dir.empty()) throw ConfigError("output.dir: must be nonempty");
    if (c.threads < 1) throw ConfigError("threads: must be >= 1");
}

RunConfig from_json(const json& j) {
    reject_unknown(j, "config",
                   {"kind", "grid", "modes", "potential", "physics", "sigma_list", "flow",
                    "classical", "dress", "quantum", "output", "seed", "threads"});
    if (!j.contains("kind")) throw ConfigError("kind: required");

    RunConfig c;
    c.kind = kind_from_string(get_str(j.at("kind"), "kind"));

    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        reject_unknown(g, "grid", {"dim", "n", "L"});
        if (g.contains("dim")) c.dim = get_int(g.at("dim"), "grid.dim");
        if (g.contains("n")) c.n = get_int(g.at("n"), "grid.n");
        if (g.contains("L")) c.L = get_num(g.at("L"), "grid.L");
    }
    if (j.contains("modes")) {
        const auto& m = j.at("modes");
        reject_unknown(m, "modes", {"n_nuc", "meson_nodes", "basis"});
        if (m.contains("n_nuc")) c.n_nuc = get_int(m.at("n_nuc"), "modes.n_nuc");
        if (m.contains("meson_nodes"))
            c.meson_nodes = get_indexvec(m.at("meson_nodes"), "modes.meson_nodes");
        if (m.contains("basis")) c.mode_basis = get_str(m.at("basis"), "modes.basis");
    } else if (c.dim != 1) {
        c.mode_basis = "plane_waves";
    }
    if (j.contains("potential")) {
        const auto& v = j.at("potential");
        reject_unknown(v, "potential", {"kind", "omega_trap"});
        if (v.contains("kind")) c.potential = get_str(v.at("kind"), "potential.kind");
        if (v.contains("omega_trap"))
            c.omega_trap = get_num(v.at("omega_trap"), "potential.omega_trap");
    }
    c.renorm.d = c.kind == RunKind::renorm_scan ? 3 : c.dim;
    // keep the default meson nodes inside the chi_{sigma0} support and the
    // sector bound away from zero for the correspondence experiment
    if (c.kind == RunKind::quantum_correspond) c.renorm.sigma0 = 4.0;
    if (j.contains("physics")) {
        const auto& p = j.at("physics");
        reject_unknown(p, "physics", {"M", "m0", "sigma0", "d"});
        if (p.contains("M")) c.renorm.M = get_num(p.at("M"), "physics.M");
        if (p.contains("m0")) c.renorm.m0 = get_num(p.at("m0"), "physics.m0");
        if (p.contains("sigma0")) c.renorm.sigma0 = get_num(p.at("sigma0"), "physics.sigma0");
        if (p.contains("d")) c.renorm.d = get_int(p.at("d"), "physics.d");
    }
    c.sigma_list = default_sigma_list();
    if (j.contains("sigma_list")) c.sigma_list = get_dvec(j.at("sigma_list"), "sigma_list");
    if (j.contains("flow")) {
        const auto& f = j.at("flow");
        reject_unknown(f, "flow",
                       {"dt", "t_final", "integrator", "energy_jump_tol", "coupling"});
        if (f.contains("dt")) c.flow.dt = get_num(f.at("dt"), "flow.dt");
        if (f.contains("t_final")) c.flow.t_final = get_num(f.at("t_final"), "flow.t_final");
        if (f.contains("integrator")) {
            const std::string s = get_str(f.at("integrator"), "flow.integrator");
            if (s == "strang")
                c.flow.integrator = FlowConfig::Integrator::strang;
            else if (s == "rk4")
                c.flow.integrator = FlowConfig::Integrator::rk4;
            else
                throw ConfigError("flow.integrator: must be \"strang\" or \"rk4\"");
        }
        if (f.contains("energy_jump_tol"))
            c.flow.energy_jump_tol = get_num(f.at("energy_jump_tol"), "flow.energy_jump_tol");
        if (f.contains("coupling")) c.flow.coupling = get_num(f.at("coupling"), "flow.coupling");
    }
    if (j.contains("classical")) {
        const auto& k = j.at("classical");
        reject_unknown(k, "classical", {"dressed_energy", "conj_residual", "max_rows"});
        if (k.contains("dressed_energy"))
            c.dressed_energy = get_bool(k.at("dressed_energy"), "classical.dressed_energy");
        if (k.contains("conj_residual"))
            c.conj_residual = get_bool(k.at("conj_residual"), "classical.conj_residual");
        if (k.contains("max_rows")) c.max_rows = get_int(k.at("max_rows"), "classical.max_rows");
    }
    if (j.contains("dress")) {
        const auto& d = j.at("dress");
        reject_unknown(d, "dress", {"n_states"});
        if (d.contains("n_states")) c.dress_states = get_int(d.at("n_states"), "dress.n_states");
    }
    if (j.contains("quantum")) {
        const auto& q = j.at("quantum");
        reject_unknown(q, "quantum",
                       {"z0", "xi", "t_grid", "eps_list", "n_max", "K", "coupling_on",
                        "cap_tol"});
        if (q.contains("z0")) c.z0 = get_cvec(q.at("z0"), "quantum.z0");
        if (q.contains("xi")) c.xi = get_cvec(q.at("xi"), "quantum.xi");
        if (q.contains("t_grid")) c.t_grid = get_dvec(q.at("t_grid"), "quantum.t_grid");
        if (q.contains("eps_list")) c.eps_list = get_dvec(q.at("eps_list"), "quantum.eps_list");
        if (q.contains("n_max")) c.n_max = get_int(q.at("n_max"), "quantum.n_max");
        if (q.contains("K")) c.K = get_num(q.at("K"), "quantum.K");
        if (q.contains("coupling_on"))
            c.coupling_on = get_bool(q.at("coupling_on"), "quantum.coupling_on");
        if (q.contains("cap_tol")) c.cap_tol = get_num(q.at("cap_tol"), "quantum.cap_tol");
    }
    if (j.contains("output")) {
        const auto& o = j.at("output");
        reject_unknown(o, "output", {"dir", "plots"});
        if (o.contains("dir")) c.out_dir = get_str(o.at("dir"), "output.dir");
        if (o.contains("plots")) c.plots = get_bool(o.at("plots"), "output.plots");
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
            throw ConfigError("seed: expected an unsigned integer");
        if (j.at("seed").is_number_integer() && j.at("seed").get<long long>() < 0)
            throw ConfigError("seed: must be nonnegative");
        c.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("threads")) c.threads = get_int(j.at("threads"), "threads");

    validate(c);
    return c;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    return from_json(j);
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string serialize_config(const RunConfig& c) {
    json j;
    j["kind"] = to_string(c.kind);
    j["grid"] = {{"dim", c.dim}, {"n", c.n}, {"L", c.L}};
    json nodes = json::array();
    for (std::size_t idx : c.meson_nodes) nodes.push_back(idx);
    j["modes"] = {{"n_nuc", c.n_nuc}, {"meson_nodes", nodes}, {"basis", c.mode_basis}};
    j["potential"] = {{"kind", c.potential}, {"omega_trap", c.omega_trap}};
    j["physics"] = {{"M", c.renorm.M},
                    {"m0", c.renorm.m0},
                    {"sigma0", c.renorm.sigma0},
                    {"d", c.renorm.d}};
    j["sigma_list"] = c.sigma_list;
    j["flow"] = {{"dt", c.flow.dt},
                 {"t_final", c.flow.t_final},
                 {"integrator",
                  c.flow.integrator == FlowConfig::Integrator::strang ? "strang" : "rk4"},
                 {"energy_jump_tol", c.flow.energy_jump_tol},
                 {"coupling", c.flow.coupling}};
    j["classical"] = {{"dressed_energy", c.dressed_energy},
                      {"conj_residual", c.conj_residual},
                      {"max_rows", c.max_rows}};
    j["dress"] = {{"n_states", c.dress_states}};
    json z0 = json::array(), xi = json::array();
    for (const cd& v : c.z0) z0.push_back({v.real(), v.imag()});
    for (const cd& v : c.xi) xi.push_back({v.real(), v.imag()});
    j["quantum"] = {{"z0", z0},           {"xi", xi},
                    {"t_grid", c.t_grid}, {"eps_list", c.eps_list},
                    {"n_max", c.n_max},   {"K", c.K},
                    {"coupling_on", c.coupling_on}, {"cap_tol", c.cap_tol}};
    j["output"] = {{"dir", c.out_dir}, {"plots", c.plots}};
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    return j.dump(2) + "\n";
}

}  // namespace skg
