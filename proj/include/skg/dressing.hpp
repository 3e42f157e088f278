#ifndef SKG_DRESSING_HPP
#define SKG_DRESSING_HPP

#include "skg/common.hpp"
#include "skg/fields.hpp"

namespace skg {

// |g(-k)| == |g(k)| on all paired nodes; selects the eq. 51 fast path
bool g_has_even_modulus(const Grid& g, const cvec& gk, double tol = 1e-13);

// Closed-form symplectic dressing flow at time theta:
//   u     -> u exp(-i (theta A_g + theta^2 Q)),  Q = Im Int F(|u|^2) |g|^2 e^{ikx} dk
//   alpha -> alpha - i theta g F(|u|^2)
// Q vanishes when |g| is even (the Lemma 8 fast path).
ClassicalState dress(const ClassicalState& z, const cvec& gk, double theta);

// Frechet derivative of dress at z applied to the tangent (v, beta):
//   ( (v - i theta B_g u) e^{-i theta A_g},  beta - 2 i theta g F(Re(conj(u) v)) )
// with B_g the eq. 42 field built from beta. Valid on the eq. 51 branch.
struct Tangent {
    cvec v, beta;
};
Tangent dress_derivative(const ClassicalState& z, const cvec& gk, double theta,
                         const Tangent& t);

// symplectic form Im <(v1,b1),(v2,b2)> with the grid inner products
double symplectic_form(const Grid& g, const Tangent& a, const Tangent& b);

// discrete Sobolev norms ||(1+k^2)^{s/2} (.)||
double sobolev_norm_u(const Grid& g, const cvec& u, double s);
double sobolev_norm_alpha(const Grid& g, const cvec& alpha, double s);

// eq. 63 empirical growth exponent over states scaled by {1,2,4,8}
struct GrowthReport {
    int lambda = 1;      // smallest integer exponent covering the family
    double C = 0.0;      // max ||D z|| / ||z||^lambda over the family
    dvec slopes;         // log-log slopes between consecutive scales
    bool stable = false; // slopes within 0.5 of each other
};
GrowthReport growth_bound_check(const ClassicalState& z, const cvec& gk, double theta,
                                double s, double varsigma);

}  // namespace skg

#endif
