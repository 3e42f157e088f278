#include "skg/flow.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "skg/dressing.hpp"
#include "skg/kernels.hpp"

namespace skg {

namespace {

// exact linear propagator for time tau: kinetic+V on u, e^{-i tau omega} on alpha
class LinearStep {
public:
    LinearStep(const Grid& g, const ExternalPotential& V, const RenormParams& p, double tau)
        : g_(&g), harmonic_(V.kind == ExternalPotential::Kind::harmonic) {
        const Dispersion disp = p.dispersion();
        aphase_.resize(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            aphase_[i] = -tau * disp.omega_ksq(g.ksq()[i]);
        if (!harmonic_) {
            uphase_.resize(g.size());
            for (std::size_t i = 0; i < g.size(); ++i)
                uphase_[i] = -tau * g.ksq()[i] / (2.0 * p.M);
            return;
        }
        // one-axis discrete oscillator eigensystem; the harmonic trap is
        // isotropic so one n x n propagator serves every axis
        const int n = g.n();
        Eigen::MatrixXd H(n, n);
        for (int b = 0; b < n; ++b) {
            cvec col(static_cast<std::size_t>(n), cd(0.0, 0.0));
            col[static_cast<std::size_t>(b)] = 1.0;
            cvec lap = spectral_derivative(g1d(g), spectral_derivative(g1d(g), col, 0), 0);
            for (int a = 0; a < n; ++a)
                H(a, b) = lap[static_cast<std::size_t>(a)].real() / (2.0 * p.M);
            const double x = g.x1(b);
            H(b, b) += 0.5 * V.omega_trap * V.omega_trap * x * x;
        }
        H = 0.5 * (H + H.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
        Eigen::VectorXcd ph(n);
        for (int i = 0; i < n; ++i) ph(i) = std::exp(cd(0.0, -tau * es.eigenvalues()(i)));
        prop_ = es.eigenvectors().cast<cd>() * ph.asDiagonal() *
                es.eigenvectors().transpose().cast<cd>();
    }

    void apply(ClassicalState& z) const {
        const Grid& g = *g_;
        if (!harmonic_) {
            cvec uk = to_k(g, z.u);
            kernels::expi_mul(uk.data(), uphase_.data(), uk.data(), uk.size());
            z.u = to_x(g, uk);
        } else {
            const int n = g.n();
            Eigen::VectorXcd line(n), out(n);
            for (int a = 0; a < g.d(); ++a) {
                std::size_t stride = 1;
                for (int b = a + 1; b < g.d(); ++b) stride *= static_cast<std::size_t>(n);
                const std::size_t block = stride * static_cast<std::size_t>(n);
                for (std::size_t base = 0; base < g.size(); base += block)
                    for (std::size_t off = 0; off < stride; ++off) {
                        for (int j = 0; j < n; ++j)
                            line(j) = z.u[base + off + static_cast<std::size_t>(j) * stride];
                        out.noalias() = prop_ * line;
                        for (int j = 0; j < n; ++j)
                            z.u[base + off + static_cast<std::size_t>(j) * stride] = out(j);
                    }
            }
        }
        kernels::expi_mul(z.alpha.data(), aphase_.data(), z.alpha.data(), z.alpha.size());
    }

private:
    // the eigensystem only needs a one-axis view; for d = 1 this is the grid
    // itself and for d > 1 a scratch one-axis grid with the same n and L
    const Grid& g1d(const Grid& g) {
        if (g.d() == 1) return g;
        if (!scratch_) scratch_ = std::make_unique<Grid>(1, g.n(), g.L());
        return *scratch_;
    }

    const Grid* g_;
    bool harmonic_;
    dvec uphase_, aphase_;
    Eigen::MatrixXcd prop_;
    std::unique_ptr<Grid> scratch_;
};

double scaled_energy(const ClassicalState& z, const ExternalPotential& V, const RenormParams& p,
                     double coupling) {
    return energy_free(z, V, p) + coupling * yukawa_interaction(z, p, nullptr);
}

// exact eq. 72 coupled kick: |u|^2 is frozen, alpha moves linearly, so the
// midpoint A equals the time-averaged phase. kick(k) is the spec's
// coupling * (2 omega)^{-1/2} * Funitary(|u|^2); cw is the matching A kernel.
void yukawa_kick(ClassicalState& z, const RenormParams& p, const cvec& cw, double dt,
                 double coupling) {
    if (coupling == 0.0) return;
    const Grid& g = *z.grid;
    const Dispersion disp = p.dispersion();
    cvec rho(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) rho[i] = std::norm(z.u[i]);
    cvec kick = to_k(g, rho);
    for (std::size_t i = 0; i < g.size(); ++i)
        kick[i] *= coupling / std::sqrt(2.0 * disp.omega_ksq(g.ksq()[i]));
    cvec amid = z.alpha;
    kernels::axpy(amid.data(), cd(0.0, -0.5 * dt), kick.data(), g.size());
    dvec A = a_g_field(g, amid, cw);
    dvec phase(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) phase[i] = -dt * coupling * A[i];
    kernels::expi_mul(z.u.data(), phase.data(), z.u.data(), g.size());
    kernels::axpy(z.alpha.data(), cd(0.0, -dt), kick.data(), g.size());
}

cvec coupling_kernel(const Grid& g, const RenormParams& p) {
    const Dispersion disp = p.dispersion();
    cvec cw(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        cw[i] = std::pow(2.0 * pi, -0.5 * g.d()) /
                std::sqrt(2.0 * disp.omega_ksq(g.ksq()[i]));
    return cw;
}

}  // namespace

void FlowConfig::validate() const {
    if (!(dt > 0.0)) throw ConfigError("flow: dt must be positive");
    if (!std::isfinite(t_final) || t_final < 0.0)
        throw ConfigError("flow: t_final must be finite and nonnegative");
    if (!std::isfinite(coupling)) throw ConfigError("flow: coupling must be finite");
    const double s = std::round(t_final / dt);
    if (std::abs(s * dt - t_final) > 1e-9 * std::max(1.0, t_final))
        throw ConfigError("flow: dt must divide t_final");
}

int FlowConfig::steps() const { return static_cast<int>(std::llround(t_final / dt)); }

ClassicalState free_flow(const ClassicalState& z, double t, const ExternalPotential& V,
                         const RenormParams& p) {
    LinearStep L(*z.grid, V, p, t);
    ClassicalState out = z;
    L.apply(out);
    return out;
}

Trajectory evolve_yukawa(const ClassicalState& z0, const FlowConfig& cfg,
                         const ExternalPotential& V, const RenormParams& p,
                         const StepObserver& obs) {
    cfg.validate();
    if (cfg.integrator != FlowConfig::Integrator::strang)
        throw ConfigError("flow: the grid flow is Strang-only");
    const Grid& g = *z0.grid;
    const int nsteps = cfg.steps();
    LinearStep half(g, V, p, 0.5 * cfg.dt);
    const cvec cw = coupling_kernel(g, p);

    Trajectory out{{}, z0};
    out.records.reserve(static_cast<std::size_t>(nsteps) + 1);
    double e_prev = scaled_energy(out.state, V, p, cfg.coupling);
    out.records.push_back({0.0, mass(out.state), e_prev});
    if (obs) obs(0, 0.0, out.state);

    for (int step = 1; step <= nsteps; ++step) {
        half.apply(out.state);
        yukawa_kick(out.state, p, cw, cfg.dt, cfg.coupling);
        half.apply(out.state);
        const double e = scaled_energy(out.state, V, p, cfg.coupling);
        if (std::abs(e - e_prev) > cfg.energy_jump_tol * (1.0 + std::abs(e_prev)))
            throw NumericError("flow: single-step energy jump, reduce dt");
        e_prev = e;
        const double t = step * cfg.dt;
        out.records.push_back({t, mass(out.state), e});
        if (obs) obs(step, t, out.state);
    }
    return out;
}

cvec galerkin_flow(const PolySymbol& sym, cvec z0, const FlowConfig& cfg) {
    cfg.validate();
    const auto f = [&](const cvec& z) {
        cvec gz = gradient_zbar(sym, z);
        for (cd& v : gz) v *= cd(0.0, -1.0);
        return gz;
    };
    const int nsteps = cfg.steps();
    const double h = cfg.dt;
    for (int step = 0; step < nsteps; ++step) {
        const cvec k1 = f(z0);
        cvec zt = z0;
        kernels::axpy(zt.data(), 0.5 * h, k1.data(), zt.size());
        const cvec k2 = f(zt);
        zt = z0;
        kernels::axpy(zt.data(), 0.5 * h, k2.data(), zt.size());
        const cvec k3 = f(zt);
        zt = z0;
        kernels::axpy(zt.data(), h, k3.data(), zt.size());
        const cvec k4 = f(zt);
        for (std::size_t i = 0; i < z0.size(); ++i)
            z0[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return z0;
}

Trajectory evolve_dressed(const ClassicalState& z0, const FlowConfig& cfg,
                          const ExternalPotential& V, const RenormParams& p, DressedMethod method,
                          const ModeSet* modes, const StepObserver& obs) {
    cfg.validate();
    const Grid& g = *z0.grid;
    if (method == DressedMethod::conjugation) {
        if (cfg.coupling != 1.0)
            throw ConfigError("flow: coupling scale applies to the undressed flow only");
        const cvec gk = g_on_grid(g, SigmaVal::inf(), p);
        StepObserver inner_obs;
        if (obs)
            inner_obs = [&](int step, double t, const ClassicalState& w) {
                obs(step, t, dress(w, gk, -1.0));
            };
        Trajectory inner = evolve_yukawa(dress(z0, gk, 1.0), cfg, V, p, inner_obs);
        // Prop. 7 makes the inner undressed energy the dressed energy of the
        // conjugated trajectory, so the records carry over unchanged
        return Trajectory{std::move(inner.records), dress(inner.state, gk, -1.0)};
    }

    if (modes == nullptr) throw ConfigError("flow: galerkin evolution needs a mode set");
    ReduceOptions ropt;
    const PolySymbol sym = reduce_energy(EnergyKind::dressed, *modes, V, p, ropt);
    cvec z(static_cast<std::size_t>(modes->n_total()));
    for (int i = 0; i < modes->n_nuc(); ++i)
        z[static_cast<std::size_t>(i)] =
            inner_x(g, modes->phi[static_cast<std::size_t>(i)], z0.u);
    for (int m = 0; m < modes->n_mes(); ++m)
        z[static_cast<std::size_t>(modes->n_nuc() + m)] =
            std::sqrt(g.hk()) * z0.alpha[modes->knodes[static_cast<std::size_t>(m)]];

    const int nsteps = cfg.steps();
    Trajectory out{{}, z0};
    out.records.reserve(static_cast<std::size_t>(nsteps) + 1);
    const auto record = [&](int step, const cvec& zc) {
        double nuc = 0.0;
        for (int i = 0; i < modes->n_nuc(); ++i) nuc += std::norm(zc[static_cast<std::size_t>(i)]);
        const double e = evaluate(sym, zc).real();
        const double t = step * cfg.dt;
        out.records.push_back({t, nuc, e});
        if (obs) obs(step, t, state_from_modes(*modes, zc));
        return e;
    };
    double e_prev = record(0, z);
    FlowConfig one = cfg;
    one.t_final = cfg.dt;
    for (int step = 1; step <= nsteps; ++step) {
        z = galerkin_flow(sym, std::move(z), one);
        const double e = record(step, z);
        if (std::abs(e - e_prev) > cfg.energy_jump_tol * (1.0 + std::abs(e_prev)))
            throw NumericError("flow: single-step energy jump, reduce dt");
        e_prev = e;
    }
    out.state = state_from_modes(*modes, z);
    return out;
}

double conjugation_residual(const ClassicalState& z, double t, const FlowConfig& cfg,
                            const ExternalPotential& V, const RenormParams& p) {
    FlowConfig direct = cfg;
    direct.t_final = t;
    const ClassicalState za = evolve_yukawa(z, direct, V, p).state;

    FlowConfig fine = direct;
    fine.dt = cfg.dt / 8.0;
    const cvec gk = g_on_grid(*z.grid, SigmaVal::inf(), p);
    const ClassicalState inner = dress(z, gk, -1.0);
    const ClassicalState hat = evolve_dressed(inner, fine, V, p, DressedMethod::conjugation).state;
    const ClassicalState zb = dress(hat, gk, 1.0);

    cvec du = za.u, da = za.alpha;
    kernels::axpy(du.data(), cd(-1.0, 0.0), zb.u.data(), du.size());
    kernels::axpy(da.data(), cd(-1.0, 0.0), zb.alpha.data(), da.size());
    return std::sqrt(norm_x_sq(*z.grid, du) + norm_k_sq(*z.grid, da));
}

}  // namespace skg
