#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "skg/dressing.hpp"
#include "skg/fields.hpp"
#include "test_util.hpp"

using namespace skg;
using testutil::random_smooth_state;

TEST_CASE("free energy reproduces the harmonic oscillator ground state") {
    // H = -d^2/2 + w^2 x^2 / 2 has ground energy w/2 at u = (w/pi)^{1/4} e^{-w x^2/2}
    const double w = 2.0;
    Grid grid(1, 256, 8.0);
    cvec u(grid.size());
    for (int j = 0; j < grid.n(); ++j) {
        const double x = grid.x1(j);
        u[j] = std::pow(w / pi, 0.25) * std::exp(-0.5 * w * x * x);
    }
    auto z = make_state(grid, u, cvec(grid.size(), cd(0.0, 0.0)));
    RenormParams p;
    p.d = 1;
    CHECK(mass(z) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(energy_free(z, ExternalPotential::harmonic(w), p) ==
          doctest::Approx(0.5 * w).epsilon(1e-10));
}

TEST_CASE("Yukawa interaction against a two-mode hand computation") {
    Grid grid(1, 32, 5.0);
    RenormParams p;
    p.d = 1;
    const Dispersion disp = p.dispersion();

    const cd a(0.8, 0.1), b(-0.3, 0.45);
    const double k1 = pi / grid.L();
    cvec u(grid.size());
    for (int j = 0; j < grid.n(); ++j)
        u[j] = a + b * std::exp(cd(0.0, k1 * grid.x1(j)));

    cvec alpha(grid.size(), cd(0.0, 0.0));
    const cd c0(0.2, -0.7), c1(1.1, 0.4);
    alpha[0] = c0;
    alpha[1] = c1;
    auto z = make_state(grid, u, alpha);

    // F(|u|^2) is exactly 2L(|a|^2+|b|^2) at k=0 and 2L conj(a) b at k1
    const double twoL = 2.0 * grid.L();
    const cd F0 = twoL * (std::norm(a) + std::norm(b));
    const cd F1 = twoL * std::conj(a) * b;
    const double cfac = std::pow(2.0 * pi, -0.5);
    const cd t0 = std::conj(c0) * cfac / std::sqrt(2.0 * disp.omega(0.0)) * F0;
    const cd t1 = std::conj(c1) * cfac / std::sqrt(2.0 * disp.omega(k1)) * F1;
    const double expect = 2.0 * grid.hk() * (t0 + t1).real();

    CHECK(yukawa_interaction(z, p) == doctest::Approx(expect).epsilon(1e-12));

    // a k-space weight multiplies each mode contribution
    dvec cut(grid.size(), 0.0);
    cut[0] = 0.25;
    cut[1] = 2.0;
    const double expect_cut =
        2.0 * grid.hk() * (0.25 * t0 + 2.0 * t1).real();
    CHECK(yukawa_interaction(z, p, &cut) == doctest::Approx(expect_cut).epsilon(1e-12));

    // meson free part: single sum h_k sum omega |alpha|^2
    const double mes = grid.hk() * (disp.omega(0.0) * std::norm(c0) +
                                    disp.omega(k1) * std::norm(c1));
    CHECK(energy_free(z, ExternalPotential::zero(), p) -
              energy_free(make_state(grid, u, cvec(grid.size(), cd(0.0, 0.0))),
                          ExternalPotential::zero(), p) ==
          doctest::Approx(mes).epsilon(1e-12));
}

TEST_CASE("A_g field: single-mode hand value") {
    Grid grid(1, 16, 3.0);
    cvec gk(grid.size(), cd(0.0, 0.0)), alpha(grid.size(), cd(0.0, 0.0));
    const cd gv(0.0, -0.6), av(0.9, 0.2);
    gk[5] = gv;
    alpha[5] = av;
    auto A = a_g_field(grid, alpha, gk);
    for (int j = 0; j < grid.n(); ++j) {
        const cd term = std::conj(gv) * av *
                        std::exp(cd(0.0, grid.k1(5) * grid.x1(j)));
        CHECK(A[j] == doctest::Approx(2.0 * grid.hk() * term.real()).epsilon(1e-13));
    }
}

TEST_CASE("dressed energy at sigma = sigma0 is the sigma0-smeared Yukawa energy") {
    // g_{sigma0} = 0, so the dressing is the identity and only the
    // chi_{sigma0}-smeared coupling survives
    std::mt19937_64 rng(11);
    Grid grid(1, 128, 8.0);
    RenormParams p;
    p.d = 1;
    auto z = random_smooth_state(grid, rng);
    const auto V = ExternalPotential::harmonic(1.0);
    const double lhs = energy_dressed(z, V, p, SigmaVal::finite(p.sigma0));
    const dvec chi0 = chi0_on_grid(grid, p);
    const double rhs = energy_yukawa(z, V, p, &chi0);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("sigma0 = inf removes every dressing kernel") {
    // chi_{sigma0} == 1 forces g = r = V = 0 and the plain coupling survives
    std::mt19937_64 rng(21);
    Grid grid(1, 128, 8.0);
    RenormParams p;
    p.d = 1;
    p.sigma0 = std::numeric_limits<double>::infinity();
    auto z = random_smooth_state(grid, rng);
    const auto V = ExternalPotential::harmonic(0.5);
    const double lhs = energy_dressed(z, V, p);
    const double rhs = energy_yukawa(z, V, p);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("dressed energy equals bare energy of the dressed state") {
    // E-hat(z) = E(D_g(1) z) with the matching cutoff pair, exactly on the grid
    std::mt19937_64 rng(12);
    RenormParams p;

    auto check_case = [&](const Grid& grid, const SigmaVal& sigma, int nstates) {
        p.d = grid.d();
        auto gk = g_on_grid(grid, sigma, p);
        dvec chis(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            chis[i] = chi_sigma(std::sqrt(grid.ksq()[i]), sigma);
        const auto V = ExternalPotential::harmonic(0.7);
        for (int s = 0; s < nstates; ++s) {
            auto z = random_smooth_state(grid, rng, 1.0 / 6.0, 0.4);
            const double lhs = energy_dressed(z, V, p, sigma);
            const double rhs = energy_yukawa(dress(z, gk, 1.0), V, p, &chis);
            CHECK(std::abs(lhs - rhs) <= 1e-9 * (1.0 + std::abs(lhs)));
        }
    };

    Grid g1(1, 256, 10.0);
    check_case(g1, SigmaVal::inf(), 10);
    check_case(g1, SigmaVal::finite(4.0), 5);
    Grid g3(3, 16, 6.0);
    check_case(g3, SigmaVal::inf(), 3);
}
