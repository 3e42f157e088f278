#ifndef SKG_TEST_UTIL_HPP
#define SKG_TEST_UTIL_HPP

#include <cmath>
#include <random>

#include "skg/fields.hpp"
#include "skg/grid.hpp"

namespace skg::testutil {

inline cvec random_cvec(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> dist(0.0, 1.0);
    cvec v(n);
    for (auto& x : v) x = cd(dist(rng), dist(rng));
    return v;
}

// random field with a Gaussian wavenumber envelope cut at kc = kc_frac * kmax,
// so products and phases stay below the aliasing floor
inline cvec random_smooth_k(const Grid& g, std::mt19937_64& rng, double kc_frac,
                            double amp) {
    std::normal_distribution<double> dist(0.0, 1.0);
    const double kmax = pi * g.n() / (2.0 * g.L());
    const double kc = kc_frac * kmax;
    cvec v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double env = std::exp(-0.5 * g.ksq()[i] / (kc * kc));
        v[i] = amp * env * cd(dist(rng), dist(rng));
    }
    return v;
}

inline ClassicalState random_smooth_state(const Grid& g, std::mt19937_64& rng,
                                          double kc_frac = 1.0 / 6.0,
                                          double amp = 0.5) {
    ClassicalState z;
    z.grid = &g;
    z.u = to_x(g, random_smooth_k(g, rng, kc_frac, amp));
    z.alpha = random_smooth_k(g, rng, kc_frac, amp);
    return z;
}

}  // namespace skg::testutil

#endif
