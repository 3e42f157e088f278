#ifndef SKG_RENORM_HPP
#define SKG_RENORM_HPP

#include <functional>

#include "skg/common.hpp"
#include "skg/grid.hpp"

namespace skg {

// UV cutoff value: finite sigma in (sigma0, inf), or the removed-cutoff limit.
struct SigmaVal {
    bool infinite = true;
    double value = 0.0;
    static SigmaVal inf() { return SigmaVal{true, 0.0}; }
    static SigmaVal finite(double s) { return SigmaVal{false, s}; }
};

enum class CutoffProfile : int { smooth_mollifier = 0 };

struct RenormParams {
    double M = 1.0;      // nucleon mass
    double m0 = 1.0;     // meson mass
    double sigma0 = 1.0; // infrared splitting scale, >= 0
    int d = 3;
    CutoffProfile profile = CutoffProfile::smooth_mollifier;
    Dispersion dispersion() const { return Dispersion{m0}; }
    void validate() const;
};

// C-infinity profile: 1 for r <= 1, 0 for r >= 2, monotone in between.
double chi_profile(double r);
// chi_sigma(k) = chi(|k|/sigma); sigma = inf gives 1, sigma = 0 gives 0 (k > 0)
double chi_sigma(double knorm, const SigmaVal& sigma);

// q(k) = (chi_sigma - chi_sigma0) / (k^2/2M + omega(k)); g = -i (2pi)^{-d/2} (2 omega)^{-1/2} q
double q_factor(double knorm, const SigmaVal& sigma, const RenormParams& p);
double g_mag(double knorm, const SigmaVal& sigma, const RenormParams& p);

// eq. 4 self-energy; diverges logarithmically as sigma -> inf
double self_energy(const SigmaVal& sigma, const RenormParams& p);

// eq. 15 radial Fourier transform in d = 3:
// (4pi/|x|) Int_0^inf f(r) r sin(r|x|) dr, with the finite r -> 0 limit at x = 0.
// r_max bounds the support (pass a finite value for compactly supported f;
// an infinite tail is summed over oscillation cells with alternating-series
// acceleration).
double radial_ft(const std::function<double(double)>& f, double x, double r_max);

// V_sigma = V1 + V2, eq. 10 / eq. 28, d = 3
struct PotentialValue {
    double value = 0.0;
    bool singular = false;  // set for sigma = inf at x = 0 (capped quadrature)
};
double v1_sigma(double x, const SigmaVal& sigma, const RenormParams& p);
PotentialValue v2_sigma(double x, const SigmaVal& sigma, const RenormParams& p);
PotentialValue v_sigma(double x, const SigmaVal& sigma, const RenormParams& p);
// eq. 16 constant: |V2(x)| <= ctilde / |x|
double v2_bound_ctilde(const SigmaVal& sigma, const RenormParams& p);

// eq. 29 weighted norms of r_sigma = -i k g_sigma
double norm_w12_r(const SigmaVal& sigma, const RenormParams& p);  // ||omega^{-1/2} r||_2
double norm_w14_r(const SigmaVal& sigma, const RenormParams& p);  // ||omega^{-1/4} r||_2

// grid samplings
cvec g_on_grid(const Grid& g, const SigmaVal& sigma, const RenormParams& p);
std::vector<dvec> r_on_grid(const Grid& g, const SigmaVal& sigma, const RenormParams& p);
dvec chi0_on_grid(const Grid& g, const RenormParams& p);           // chi_{sigma0}(k)
dvec yukawa_cutoff_on_grid(const Grid& g, const RenormParams& p);  // dressed-energy smearing
dvec vhat_on_grid(const Grid& g, const SigmaVal& sigma, const RenormParams& p);

}  // namespace skg

#endif
