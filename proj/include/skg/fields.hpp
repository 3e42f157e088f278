#ifndef SKG_FIELDS_HPP
#define SKG_FIELDS_HPP

#include "skg/common.hpp"
#include "skg/grid.hpp"
#include "skg/renorm.hpp"

namespace skg {

struct ExternalPotential {
    enum class Kind { zero, harmonic } kind = Kind::zero;
    double omega_trap = 1.0;
    dvec values_on(const Grid& g) const;
    static ExternalPotential zero() { return {}; }
    static ExternalPotential harmonic(double w) {
        return ExternalPotential{Kind::harmonic, w};
    }
};

// (u, alpha): nucleon field on the position grid, meson mode function on the
// wavenumber grid.
struct ClassicalState {
    const Grid* grid = nullptr;
    cvec u;
    cvec alpha;
};

ClassicalState make_state(const Grid& g, cvec u, cvec alpha);

double mass(const ClassicalState& z);  // ||u||_2^2

// E_0 = <u, (-Lap/2M + V) u> + <alpha, omega alpha>
double energy_free(const ClassicalState& z, const ExternalPotential& V, const RenormParams& p);

// E = E_0 + Int A |u|^2; cutoff = nullptr means the plain eq. 72 coupling
// (cutoff function identically 1), otherwise the k-space smearing profile.
double energy_yukawa(const ClassicalState& z, const ExternalPotential& V, const RenormParams& p,
                     const dvec* cutoff = nullptr);

// eq. 50 dressed energy; sigma = inf is E-hat, finite sigma the finite-cutoff
// analog (kernels r_sigma / V_sigma; the Yukawa smearing stays chi_sigma0 for
// every sigma because composing with D_{g_sigma}(1) cancels the rest).
double energy_dressed(const ClassicalState& z, const ExternalPotential& V, const RenormParams& p,
                      const SigmaVal& sigma = SigmaVal::inf());

// eq. 40 with the plain transform convention
double dressing_functional(const ClassicalState& z, const cvec& g);

// eq. 42: A_g(x) = Int (g conj(alpha) e^{-ikx} + conj(g) alpha e^{ikx}) dk, real
dvec a_g_field(const Grid& g, const cvec& alpha, const cvec& gk);

// same contraction against a complex k-function phi: Int phi(k) conj(alpha) e^{-ikx} dk + c.c.
// used with phi = r_sigma components
dvec a_g_field_real_kernel(const Grid& g, const cvec& alpha, const dvec& kernel);

// interaction part of the Yukawa energy, 2 Re <alpha, cutoff (2w)^{-1/2} F_u(|u|^2)>
double yukawa_interaction(const ClassicalState& z, const RenormParams& p,
                          const dvec* cutoff = nullptr);

}  // namespace skg

#endif
