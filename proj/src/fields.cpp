#include "skg/fields.hpp"

#include <cmath>

#include "skg/kernels.hpp"

namespace skg {

dvec ExternalPotential::values_on(const Grid& g) const {
    dvec out(g.size(), 0.0);
    if (kind == Kind::harmonic) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            double x2 = 0.0;
            for (int a = 0; a < g.d(); ++a) x2 += g.xcomp(a)[i] * g.xcomp(a)[i];
            out[i] = 0.5 * omega_trap * omega_trap * x2;
        }
    }
    return out;
}

ClassicalState make_state(const Grid& g, cvec u, cvec alpha) {
    if (u.size() != g.size() || alpha.size() != g.size())
        throw ConfigError("state: field size does not match grid");
    return ClassicalState{&g, std::move(u), std::move(alpha)};
}

double mass(const ClassicalState& z) { return norm_x_sq(*z.grid, z.u); }

double energy_free(const ClassicalState& z, const ExternalPotential& V, const RenormParams& p) {
    const Grid& g = *z.grid;
    cvec uk = to_k(g, z.u);
    double kin = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) kin += g.ksq()[i] * std::norm(uk[i]);
    kin *= g.hk() / (2.0 * p.M);
    double pot = 0.0;
    if (V.kind != ExternalPotential::Kind::zero) {
        const dvec vals = V.values_on(g);
        pot = g.hx() * kernels::wnrm2sq(vals.data(), z.u.data(), g.size());
    }
    const Dispersion disp = p.dispersion();
    double mes = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        mes += disp.omega_ksq(g.ksq()[i]) * std::norm(z.alpha[i]);
    mes *= g.hk();
    return kin + pot + mes;
}

double yukawa_interaction(const ClassicalState& z, const RenormParams& p, const dvec* cutoff) {
    const Grid& g = *z.grid;
    const Dispersion disp = p.dispersion();
    cvec F = plain_ft_density(g, z.u);  // (2pi)^{d/2} * unitary_ft(|u|^2)
    const double c = std::pow(2.0 * pi, -0.5 * g.d());
    cd acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double w = disp.omega_ksq(g.ksq()[i]);
        double s = c / std::sqrt(2.0 * w);
        if (cutoff) s *= (*cutoff)[i];
        acc += std::conj(z.alpha[i]) * s * F[i];
    }
    return 2.0 * g.hk() * acc.real();
}

double energy_yukawa(const ClassicalState& z, const ExternalPotential& V, const RenormParams& p,
                     const dvec* cutoff) {
    return energy_free(z, V, p) + yukawa_interaction(z, p, cutoff);
}

dvec a_g_field(const Grid& g, const cvec& alpha, const cvec& gk) {
    // 2 Re h_k sum_k conj(g) alpha e^{+ikx}
    cvec prod(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) prod[i] = std::conj(gk[i]) * alpha[i];
    cvec s = sum_over_k(g, prod);
    dvec out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = 2.0 * s[i].real();
    return out;
}

dvec a_g_field_real_kernel(const Grid& g, const cvec& alpha, const dvec& kernel) {
    cvec prod(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) prod[i] = kernel[i] * alpha[i];
    cvec s = sum_over_k(g, prod);
    dvec out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = 2.0 * s[i].real();
    return out;
}

double dressing_functional(const ClassicalState& z, const cvec& g) {
    const Grid& gr = *z.grid;
    cvec F = plain_ft_density(gr, z.u);
    cd acc = 0.0;
    for (std::size_t i = 0; i < gr.size(); ++i) acc += std::conj(z.alpha[i]) * g[i] * F[i];
    return 2.0 * gr.hk() * acc.real();
}

double energy_dressed(const ClassicalState& z, const ExternalPotential& V, const RenormParams& p,
                      const SigmaVal& sigma) {
    const Grid& g = *z.grid;
    const double free = energy_free(z, V, p);

    const dvec cutoff = yukawa_cutoff_on_grid(g, p);
    const double yuk = yukawa_interaction(z, p, &cutoff);

    // (1/2M) Int |A_r(x)|^2 |u(x)|^2 dx with the d-component field A_r
    const std::vector<dvec> r = r_on_grid(g, sigma, p);
    dvec a2(g.size(), 0.0);
    for (int a = 0; a < g.d(); ++a) {
        dvec Ar = a_g_field_real_kernel(g, z.alpha, r[a]);
        for (std::size_t i = 0; i < g.size(); ++i) a2[i] += Ar[i] * Ar[i];
    }
    const double quad = g.hx() / (2.0 * p.M) *
                        kernels::wnrm2sq(a2.data(), z.u.data(), g.size());

    // -(2/M) Re Int r(k) conj(alpha)(k) e^{-ikx} conj(u) D_x u dx dk
    cd cross_acc = 0.0;
    for (int a = 0; a < g.d(); ++a) {
        cvec ra(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) ra[i] = r[a][i] * z.alpha[i];
        // R_a(x) = Int r_a conj(alpha) e^{-ikx} dk = conj(sum_over_k(r_a alpha))
        cvec Ra = sum_over_k(g, ra);
        cvec du = spectral_derivative(g, z.u, a);
        cd term = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            term += std::conj(Ra[i]) * std::conj(z.u[i]) * du[i];
        cross_acc += term;
    }
    const double cross = -(2.0 / p.M) * g.hx() * cross_acc.real();

    // pair term in k-space: (1/2) Int Vhat(k) |F(|u|^2)(k)|^2 dk
    const dvec vhat = vhat_on_grid(g, sigma, p);
    cvec F = plain_ft_density(g, z.u);
    double pair = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) pair += vhat[i] * std::norm(F[i]);
    pair *= 0.5 * g.hk();

    return free + yuk + quad + cross + pair;
}

}  // namespace skg
