#include "skg/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <random>
#include <thread>

#include "skg/dressing.hpp"
#include "skg/fields.hpp"
#include "skg/flow.hpp"
#include "skg/fock.hpp"
#include "skg/grid.hpp"
#include "skg/output.hpp"
#include "skg/polysym.hpp"
#include "skg/renorm.hpp"

namespace skg {

namespace {

using nlohmann::json;

struct Ctx {
    std::string out_dir;
    bool plots = true;
    std::vector<CheckResult> checks;
    std::vector<std::string> artifacts;

    void check(const std::string& name, double value, double threshold) {
        checks.push_back({name, value, threshold, value <= threshold});
    }
    void check_positive(const std::string& name, double value) {
        checks.push_back({name, value, 0.0, value > 0.0});
    }
    void emit(const std::string& name, const std::string& content) {
        write_text_atomic(out_dir + "/" + name, content);
        artifacts.push_back(name);
    }
};

ExternalPotential potential_of(const RunConfig& cfg) {
    return cfg.potential == "zero" ? ExternalPotential::zero()
                                   : ExternalPotential::harmonic(cfg.omega_trap);
}

cvec smooth_k(const Grid& g, std::mt19937_64& rng, double amp) {
    std::normal_distribution<double> dist(0.0, 1.0);
    const double kc = pi * g.n() / (12.0 * g.L());  // kmax / 6
    cvec v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double env = std::exp(-0.5 * g.ksq()[i] / (kc * kc));
        v[i] = amp * env * cd(dist(rng), dist(rng));
    }
    return v;
}

ClassicalState smooth_state(const Grid& g, std::mt19937_64& rng, double amp = 0.5) {
    ClassicalState z;
    z.grid = &g;
    z.u = to_x(g, smooth_k(g, rng, amp));
    z.alpha = smooth_k(g, rng, amp);
    return z;
}

double state_dist(const ClassicalState& a, const ClassicalState& b) {
    const Grid& g = *a.grid;
    cvec du(g.size()), da(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        du[i] = a.u[i] - b.u[i];
        da[i] = a.alpha[i] - b.alpha[i];
    }
    return std::sqrt(norm_x_sq(g, du) + norm_k_sq(g, da));
}

ModeSet modes_of(const RunConfig& cfg, const Grid& g, const RenormParams& p) {
    if (cfg.mode_basis == "harmonic")
        return ModeSet::harmonic(g, cfg.n_nuc, cfg.omega_trap, cfg.meson_nodes, p);
    return ModeSet::plane_waves(g, cfg.n_nuc, cfg.meson_nodes, p);
}

// ---------------------------------------------------------------- renorm scan

void run_renorm(const RunConfig& cfg, Ctx& ctx) {
    RenormParams p = cfg.renorm;
    p.validate();
    const dvec& sl = cfg.sigma_list;
    struct Row {
        double e = 0.0, w12 = 0.0, w14 = 0.0;
    };
    std::vector<Row> rows(sl.size());

    const int nth = std::max(1, std::min<int>(cfg.threads, static_cast<int>(sl.size())));
    std::vector<std::exception_ptr> errs(static_cast<std::size_t>(nth));
    const auto worker = [&](int t0) {
        try {
            for (std::size_t i = static_cast<std::size_t>(t0); i < sl.size();
                 i += static_cast<std::size_t>(nth)) {
                const SigmaVal s = SigmaVal::finite(sl[i]);
                rows[i] = {self_energy(s, p), norm_w12_r(s, p), norm_w14_r(s, p)};
            }
        } catch (...) {
            errs[static_cast<std::size_t>(t0)] = std::current_exception();
        }
    };
    if (nth == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nth; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errs)
        if (e) std::rethrow_exception(e);

    CsvBuilder csv("sigma,E_sigma,norm_w12_r,norm_w14_r");
    for (std::size_t i = 0; i < sl.size(); ++i) {
        csv.cell(sl[i]);
        csv.cell(rows[i].e);
        csv.cell(rows[i].w12);
        csv.cell(rows[i].w14);
        csv.end_row();
    }
    ctx.emit("renorm_scan.csv", csv.str());

    // E_sigma strictly decreasing along increasing sigma >= 4 sigma0
    double worst = -1.0;
    for (std::size_t i = 0; i + 1 < sl.size(); ++i)
        if (sl[i] >= 4.0 * p.sigma0 && sl[i + 1] > sl[i])
            worst = std::max(worst, rows[i + 1].e - rows[i].e);
    ctx.check("e_sigma_monotone_decreasing", worst, -1e-300);

    if (ctx.plots) {
        PlotSeries s{"E_sigma", {}, {}};
        for (std::size_t i = 0; i < sl.size(); ++i) {
            s.x.push_back(std::log(sl[i]));
            s.y.push_back(rows[i].e);
        }
        ctx.emit("e_sigma.svg", svg_line_plot("self-energy vs cutoff", "ln sigma", "E_sigma", {s}));
    }
}

// -------------------------------------------------------------- classical run

void run_classical(const RunConfig& cfg, Ctx& ctx) {
    Grid g(cfg.dim, cfg.n, cfg.L);
    const RenormParams p = cfg.renorm;
    const auto V = potential_of(cfg);
    std::mt19937_64 rng(cfg.seed);
    const ClassicalState z0 = smooth_state(g, rng);

    const Trajectory und = evolve_yukawa(z0, cfg.flow, V, p);
    const int steps = static_cast<int>(und.records.size()) - 1;

    // row cadence: every step up to max_rows rows; the residual columns bound
    // the snapshot count harder since each sample stores a full state
    int target = cfg.max_rows;
    if (cfg.conj_residual) target = std::min(target, 33);
    const int stride = std::max(1, (steps + target - 2) / (target - 1));
    std::vector<int> idx;
    for (int s = 0; s <= steps; s += stride) idx.push_back(s);
    if (idx.back() != steps) idx.push_back(steps);

    std::vector<StepRecord> dre;
    dvec resid(idx.size(), 0.0);
    if (cfg.dressed_energy || cfg.conj_residual) {
        std::map<int, ClassicalState> snaps;
        StepObserver obs;
        if (cfg.conj_residual)
            obs = [&](int step, double, const ClassicalState& w) {
                if (std::binary_search(idx.begin(), idx.end(), step)) snaps.emplace(step, w);
            };
        const Trajectory d1 = evolve_dressed(z0, cfg.flow, V, p, DressedMethod::conjugation,
                                             nullptr, obs);
        dre = d1.records;
        if (cfg.conj_residual) {
            FlowConfig half = cfg.flow;
            half.dt = cfg.flow.dt / 2.0;
            StepObserver obs2 = [&](int step, double, const ClassicalState& w) {
                if (step % 2 != 0) return;
                const auto it = snaps.find(step / 2);
                if (it == snaps.end()) return;
                const auto pos = std::lower_bound(idx.begin(), idx.end(), step / 2);
                resid[static_cast<std::size_t>(pos - idx.begin())] = state_dist(it->second, w);
            };
            evolve_dressed(z0, half, V, p, DressedMethod::conjugation, nullptr, obs2);
        }
    }

    std::string header = "t,mass,energy";
    if (cfg.dressed_energy) header += ",energy_dressed";
    if (cfg.conj_residual) header += ",conj_residual";
    CsvBuilder csv(header);
    for (std::size_t r = 0; r < idx.size(); ++r) {
        const auto& rec = und.records[static_cast<std::size_t>(idx[r])];
        csv.cell(rec.t);
        csv.cell(rec.mass);
        csv.cell(rec.energy);
        if (cfg.dressed_energy) csv.cell(dre[static_cast<std::size_t>(idx[r])].energy);
        if (cfg.conj_residual) csv.cell(resid[r]);
        csv.end_row();
    }
    ctx.emit("classical_run.csv", csv.str());

    double mass_drift = 0.0, energy_drift = 0.0, dressed_drift = 0.0;
    const double m0 = und.records.front().mass, e0 = und.records.front().energy;
    for (const auto& rec : und.records) {
        mass_drift = std::max(mass_drift, std::abs(rec.mass - m0));
        energy_drift = std::max(energy_drift, std::abs(rec.energy - e0) / (1.0 + std::abs(e0)));
    }
    ctx.check("mass_drift", mass_drift, 1e-10);
    ctx.check("energy_drift_rel", energy_drift, 1e-6);
    if (cfg.dressed_energy) {
        const double ed0 = dre.front().energy;
        for (const auto& rec : dre)
            dressed_drift =
                std::max(dressed_drift, std::abs(rec.energy - ed0) / (1.0 + std::abs(ed0)));
        ctx.check("dressed_energy_drift_rel", dressed_drift, 1e-6);
    }

    if (ctx.plots) {
        PlotSeries se{"energy", {}, {}}, sm{"mass", {}, {}};
        for (const auto& rec : und.records) {
            se.x.push_back(rec.t);
            se.y.push_back(rec.energy);
            sm.x.push_back(rec.t);
            sm.y.push_back(rec.mass);
        }
        ctx.emit("classical_run.svg",
                 svg_line_plot("undressed flow conserved quantities", "t", "value", {se, sm}));
    }
}

// --------------------------------------------------------------- dress check

void run_dress(const RunConfig& cfg, Ctx& ctx) {
    Grid g(cfg.dim, cfg.n, cfg.L);
    const RenormParams p = cfg.renorm;
    const cvec gk = g_on_grid(g, SigmaVal::inf(), p);
    std::mt19937_64 rng(cfg.seed);

    double invol = 0.0, modulus = 0.0, group = 0.0, sympl = 0.0;
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int s = 0; s < cfg.dress_states; ++s) {
        const ClassicalState z = smooth_state(g, rng);
        const ClassicalState d1 = dress(z, gk, 1.0);
        invol = std::max(invol, state_dist(dress(d1, gk, -1.0), z));
        for (std::size_t i = 0; i < g.size(); ++i)
            modulus = std::max(modulus, std::abs(std::abs(d1.u[i]) - std::abs(z.u[i])));
        const double th1 = 0.35 + 0.3 * dist(rng), th2 = -0.55 + 0.2 * dist(rng);
        group = std::max(group, state_dist(dress(dress(z, gk, th1), gk, th2),
                                           dress(z, gk, th1 + th2)));
        Tangent t1{to_x(g, smooth_k(g, rng, 0.5)), smooth_k(g, rng, 0.5)};
        Tangent t2{to_x(g, smooth_k(g, rng, 0.5)), smooth_k(g, rng, 0.5)};
        const double before = symplectic_form(g, t1, t2);
        const Tangent d_t1 = dress_derivative(z, gk, 1.0, t1);
        const Tangent d_t2 = dress_derivative(z, gk, 1.0, t2);
        sympl = std::max(sympl, std::abs(symplectic_form(g, d_t1, d_t2) - before));
    }
    ctx.check("involution", invol, 1e-12);
    ctx.check("modulus_preserved", modulus, 1e-13);
    ctx.check("group_property", group, 1e-12);
    ctx.check("symplectic_form", sympl, 1e-10);

    json rep;
    rep["states"] = cfg.dress_states;
    rep["checks"] = json::array();
    bool all = true;
    for (const auto& c : ctx.checks) {
        rep["checks"].push_back(
            {{"name", c.name}, {"max", c.value}, {"tol", c.threshold}, {"pass", c.pass}});
        all = all && c.pass;
    }
    rep["pass"] = all;
    ctx.emit("dress_check.json", rep.dump(2) + "\n");
}

// -------------------------------------------------------- quantum correspond

void run_quantum(const RunConfig& cfg, Ctx& ctx) {
    Grid g(cfg.dim, cfg.n, cfg.L);
    const RenormParams p = cfg.renorm;
    const auto V = potential_of(cfg);
    const ModeSet ms = modes_of(cfg, g, p);
    const std::size_t nm = static_cast<std::size_t>(ms.n_total());

    CorrespondenceConfig qc;
    qc.z0 = cfg.z0;
    qc.xi = cfg.xi;
    if (qc.z0.empty())
        for (std::size_t j = 0; j < nm; ++j)
            qc.z0.push_back(j < static_cast<std::size_t>(ms.n_nuc()) ? cd(0.15, 0.05)
                                                                     : cd(0.2, -0.1));
    if (qc.xi.empty())
        for (std::size_t j = 0; j < nm; ++j)
            qc.xi.push_back(j < static_cast<std::size_t>(ms.n_nuc()) ? cd(0.4, 0.0)
                                                                     : cd(0.3, 0.2));
    qc.t_grid = cfg.t_grid;
    qc.eps_list = cfg.eps_list;
    qc.n_max = cfg.n_max;
    qc.K = cfg.K;
    qc.coupling_on = cfg.coupling_on;
    qc.classical = cfg.flow;

    const auto rows = correspondence_experiment(ms, V, p, qc);

    CsvBuilder csv("epsilon,t,re_Q,im_Q,re_C,im_C,err,basis_dim,cap_violation");
    for (const auto& r : rows) {
        csv.cell(r.eps);
        csv.cell(r.t);
        csv.cell(r.Q.real());
        csv.cell(r.Q.imag());
        csv.cell(r.C.real());
        csv.cell(r.C.imag());
        csv.cell(r.err);
        csv.cell(r.basis_dim);
        csv.cell(r.cap_violation);
        csv.end_row();
    }
    ctx.emit("quantum_correspond.csv", csv.str());

    double max_err = 0.0, max_cap = 0.0;
    bool finite = true;
    for (const auto& r : rows) {
        finite = finite && std::isfinite(r.err) && std::isfinite(r.cap_violation);
        max_err = std::max(max_err, r.err);
        max_cap = std::max(max_cap, r.cap_violation);
    }
    ctx.checks.push_back({"rows_finite", max_err, 2.0, finite && max_err <= 2.0});
    ctx.check("cap_violation", max_cap, cfg.cap_tol);

    // err shrinks with eps at the latest time
    dvec eps_sorted = cfg.eps_list;
    std::sort(eps_sorted.begin(), eps_sorted.end(), std::greater<double>());
    const double t_last = cfg.t_grid.back();
    const auto err_at = [&](double eps) {
        for (const auto& r : rows)
            if (r.eps == eps && r.t == t_last) return r.err;
        return 0.0;
    };
    double margin = 1.0;
    for (std::size_t i = 0; i + 1 < eps_sorted.size(); ++i)
        margin = std::min(margin, err_at(eps_sorted[i]) - err_at(eps_sorted[i + 1]));
    ctx.check_positive("err_eps_monotone_at_t_last", margin);

    if (ctx.plots) {
        std::vector<PlotSeries> series;
        for (double e : eps_sorted) {
            PlotSeries s{"eps=" + fmt_g17(e).substr(0, 6), {}, {}};
            for (const auto& r : rows)
                if (r.eps == e) {
                    s.x.push_back(r.t);
                    s.y.push_back(r.err);
                }
            series.push_back(std::move(s));
        }
        ctx.emit("correspondence_err.svg",
                 svg_line_plot("quantum-classical gap", "t", "|Q - C|", series));
    }
}

// ----------------------------------------------------------------- verify all

void run_verify_all(const RunConfig& cfg, Ctx& ctx) {
    {
        RunConfig c = cfg;
        c.kind = RunKind::renorm_scan;
        c.renorm = RenormParams{};
        c.sigma_list = {4.0, 8.0, 16.0, 32.0};
        Ctx sub{ctx.out_dir + "/renorm_scan", ctx.plots, {}, {}};
        run_renorm(c, sub);
        for (auto& k : sub.checks) ctx.checks.push_back({"renorm." + k.name, k.value, k.threshold, k.pass});
        for (auto& a : sub.artifacts) ctx.artifacts.push_back("renorm_scan/" + a);
    }
    {
        RunConfig c = cfg;
        c.kind = RunKind::dress_check;
        c.dim = 1;
        c.n = 128;
        c.L = 8.0;
        c.renorm = RenormParams{};
        c.renorm.d = 1;
        c.dress_states = 10;
        Ctx sub{ctx.out_dir + "/dress_check", ctx.plots, {}, {}};
        run_dress(c, sub);
        for (auto& k : sub.checks) ctx.checks.push_back({"dress." + k.name, k.value, k.threshold, k.pass});
        for (auto& a : sub.artifacts) ctx.artifacts.push_back("dress_check/" + a);
    }
    {
        RunConfig c = cfg;
        c.kind = RunKind::classical_run;
        c.dim = 1;
        c.n = 64;
        c.L = 8.0;
        c.renorm = RenormParams{};
        c.renorm.d = 1;
        c.potential = "harmonic";
        c.omega_trap = 1.0;
        c.flow = FlowConfig{};
        c.flow.dt = 1e-3;
        c.flow.t_final = 0.2;
        c.max_rows = 50;
        Ctx sub{ctx.out_dir + "/classical_run", ctx.plots, {}, {}};
        run_classical(c, sub);
        for (auto& k : sub.checks) ctx.checks.push_back({"classical." + k.name, k.value, k.threshold, k.pass});
        for (auto& a : sub.artifacts) ctx.artifacts.push_back("classical_run/" + a);
    }
    {
        RunConfig c = cfg;
        c.kind = RunKind::quantum_correspond;
        c.dim = 1;
        c.n = 64;
        c.L = 8.0;
        c.renorm = RenormParams{};
        c.renorm.d = 1;
        c.renorm.sigma0 = 4.0;
        c.n_nuc = 1;
        c.meson_nodes = {13};
        c.mode_basis = "harmonic";
        c.potential = "harmonic";
        c.omega_trap = 1.0;
        c.z0 = {cd(0.15, 0.05), cd(0.2, -0.1)};
        c.xi = {cd(0.4, 0.0), cd(0.3, 0.2)};
        c.t_grid = {0.25};
        c.eps_list = {0.4, 0.1};
        c.n_max = 10;
        c.K = 1.0;
        c.flow = FlowConfig{};
        c.flow.dt = 1e-3;
        Ctx sub{ctx.out_dir + "/quantum_correspond", ctx.plots, {}, {}};
        run_quantum(c, sub);
        for (auto& k : sub.checks) ctx.checks.push_back({"quantum." + k.name, k.value, k.threshold, k.pass});
        for (auto& a : sub.artifacts) ctx.artifacts.push_back("quantum_correspond/" + a);
    }
}

}  // namespace

RunReport run(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    Ctx ctx{cfg.out_dir, cfg.plots, {}, {}};

    switch (cfg.kind) {
        case RunKind::renorm_scan: run_renorm(cfg, ctx); break;
        case RunKind::classical_run: run_classical(cfg, ctx); break;
        case RunKind::dress_check: run_dress(cfg, ctx); break;
        case RunKind::quantum_correspond: run_quantum(cfg, ctx); break;
        case RunKind::verify_all: run_verify_all(cfg, ctx); break;
    }

    RunReport rep;
    rep.checks = ctx.checks;
    rep.artifacts = ctx.artifacts;
    rep.pass = true;
    for (const auto& c : ctx.checks) rep.pass = rep.pass && c.pass;
    rep.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json summary;
    summary["kind"] = to_string(cfg.kind);
    summary["config_hash"] = hex64(fnv1a(serialize_config(cfg)));
    summary["seed"] = cfg.seed;
    summary["versions"] = json::parse(versions_json());
    summary["checks"] = json::array();
    for (const auto& c : rep.checks)
        summary["checks"].push_back({{"name", c.name},
                                     {"value", c.value},
                                     {"threshold", c.threshold},
                                     {"pass", c.pass}});
    summary["pass"] = rep.pass;
    summary["wall_time_s"] = rep.wall_time_s;
    summary["artifacts"] = rep.artifacts;
    write_text_atomic(cfg.out_dir + "/summary.json", summary.dump(2) + "\n");

    return rep;
}

}  // namespace skg
