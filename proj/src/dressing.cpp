#include "skg/dressing.hpp"

#include <algorithm>
#include <cmath>

#include "skg/kernels.hpp"

namespace skg {

bool g_has_even_modulus(const Grid& g, const cvec& gk, double tol) {
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (std::abs(std::abs(gk[i]) - std::abs(gk[g.conj_index(i)])) > tol) return false;
    }
    return true;
}

ClassicalState dress(const ClassicalState& z, const cvec& gk, double theta) {
    const Grid& g = *z.grid;
    cvec F = plain_ft_density(g, z.u);

    dvec Ag = a_g_field(g, z.alpha, gk);
    dvec phase(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) phase[i] = -theta * Ag[i];

    if (!g_has_even_modulus(g, gk)) {
        // general-g quadratic phase: integrating A_g along the alpha flow gives
        // the extra -i theta^2 Im sum_k |g|^2 F e^{ikx} (zero when |g| is even)
        cvec fg2(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) fg2[i] = F[i] * std::norm(gk[i]);
        cvec Q = sum_over_k(g, fg2);
        for (std::size_t i = 0; i < g.size(); ++i)
            phase[i] -= theta * theta * Q[i].imag();
    }

    ClassicalState out;
    out.grid = z.grid;
    out.u.resize(g.size());
    kernels::expi_mul(out.u.data(), phase.data(), z.u.data(), g.size());
    out.alpha = z.alpha;
    const cd mitheta(0.0, -theta);
    for (std::size_t i = 0; i < g.size(); ++i) out.alpha[i] += mitheta * gk[i] * F[i];
    return out;
}

Tangent dress_derivative(const ClassicalState& z, const cvec& gk, double theta,
                         const Tangent& t) {
    const Grid& g = *z.grid;
    dvec Ag = a_g_field(g, z.alpha, gk);
    dvec Bg = a_g_field(g, t.beta, gk);

    dvec phase(g.size());
    cvec tmp(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        phase[i] = -theta * Ag[i];
        tmp[i] = t.v[i] + cd(0.0, -theta) * Bg[i] * z.u[i];
    }
    Tangent out;
    out.v.resize(g.size());
    kernels::expi_mul(out.v.data(), phase.data(), tmp.data(), g.size());

    // d/dv F(|u|^2) = 2 F(Re(conj(u) v))
    dvec re_uv(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        re_uv[i] = (std::conj(z.u[i]) * t.v[i]).real();
    cvec Fuv = plain_ft(g, re_uv);
    out.beta = t.beta;
    const cd m2itheta(0.0, -2.0 * theta);
    for (std::size_t i = 0; i < g.size(); ++i) out.beta[i] += m2itheta * gk[i] * Fuv[i];
    return out;
}

double symplectic_form(const Grid& g, const Tangent& a, const Tangent& b) {
    return inner_x(g, a.v, b.v).imag() + inner_k(g, a.beta, b.beta).imag();
}

double sobolev_norm_u(const Grid& g, const cvec& u, double s) {
    cvec uk = to_k(g, u);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        acc += std::pow(1.0 + g.ksq()[i], s) * std::norm(uk[i]);
    return std::sqrt(g.hk() * acc);
}

double sobolev_norm_alpha(const Grid& g, const cvec& alpha, double s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        acc += std::pow(1.0 + g.ksq()[i], s) * std::norm(alpha[i]);
    return std::sqrt(g.hk() * acc);
}

GrowthReport growth_bound_check(const ClassicalState& z, const cvec& gk, double theta,
                                double s, double varsigma) {
    const Grid& g = *z.grid;
    auto state_norm = [&](const ClassicalState& w) {
        const double a = sobolev_norm_u(g, w.u, s);
        const double b = sobolev_norm_alpha(g, w.alpha, varsigma);
        return std::sqrt(a * a + b * b);
    };

    GrowthReport rep;
    dvec X, Y;
    for (double scale : {1.0, 2.0, 4.0, 8.0}) {
        ClassicalState w = z;
        kernels::scale(w.u.data(), cd(scale, 0.0), w.u.size());
        kernels::scale(w.alpha.data(), cd(scale, 0.0), w.alpha.size());
        X.push_back(state_norm(w));
        Y.push_back(state_norm(dress(w, gk, theta)));
    }
    for (std::size_t i = 0; i + 1 < X.size(); ++i) {
        rep.slopes.push_back((std::log(Y[i + 1]) - std::log(Y[i])) /
                             (std::log(X[i + 1]) - std::log(X[i])));
    }
    const double smax = *std::max_element(rep.slopes.begin(), rep.slopes.end());
    const double smin = *std::min_element(rep.slopes.begin(), rep.slopes.end());
    rep.stable = (smax - smin) < 0.5;
    rep.lambda = std::max(1, static_cast<int>(std::ceil(smax - 0.05)));
    rep.C = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i)
        rep.C = std::max(rep.C, Y[i] / std::pow(X[i], rep.lambda));
    return rep;
}

}  // namespace skg
