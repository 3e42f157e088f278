#include <doctest.h>

#include <cmath>
#include <random>

#include "skg/grid.hpp"

using namespace skg;

namespace {

cvec random_field(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> dist(0.0, 1.0);
    cvec v(n);
    for (auto& x : v) x = cd(dist(rng), dist(rng));
    return v;
}

}  // namespace

TEST_CASE("forward then inverse transform is the identity") {
    std::mt19937_64 rng(1);
    for (int d : {1, 2}) {
        Grid grid(d, d == 1 ? 128 : 32, 7.5);
        auto u = random_field(rng, grid.size());
        auto back = to_x(grid, to_k(grid, u));
        for (std::size_t i = 0; i < u.size(); ++i)
            CHECK(std::abs(back[i] - u[i]) < 1e-12);
    }
}

TEST_CASE("Parseval holds to near machine precision") {
    std::mt19937_64 rng(2);
    Grid grid(2, 32, 5.0);
    auto u = random_field(rng, grid.size());
    const double nx = norm_x_sq(grid, u);
    const double nk = norm_k_sq(grid, to_k(grid, u));
    CHECK(std::abs(nx - nk) < 1e-12 * nx);
}

TEST_CASE("standard Gaussian is self-dual under the unitary transform") {
    // In d dimensions exp(-|x|^2/2) maps to exp(-|k|^2/2) exactly.
    for (int d : {1, 2}) {
        Grid grid(d, d == 1 ? 256 : 64, 10.0);
        cvec u(grid.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            double x2 = 0.0;
            for (int a = 0; a < d; ++a) x2 += grid.xcomp(a)[i] * grid.xcomp(a)[i];
            u[i] = std::exp(-0.5 * x2);
        }
        auto uk = to_k(grid, u);
        double worst = 0.0;
        for (std::size_t i = 0; i < uk.size(); ++i)
            worst = std::max(worst, std::abs(uk[i] - std::exp(-0.5 * grid.ksq()[i])));
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("transforms match a direct DFT sum on a small grid") {
    // Independent oracle: evaluate the quadrature definitions by brute force.
    std::mt19937_64 rng(3);
    Grid grid(1, 16, 3.0);
    auto u = random_field(rng, 16);

    auto uk = to_k(grid, u);
    const double cfac = std::pow(2.0 * pi, -0.5);
    for (int m = 0; m < 16; ++m) {
        cd acc = 0.0;
        for (int j = 0; j < 16; ++j)
            acc += u[j] * std::exp(cd(0.0, -grid.k1(m) * grid.x1(j)));
        acc *= cfac * grid.hx();
        CHECK(std::abs(uk[m] - acc) < 1e-12);
    }

    auto fk = plain_ft_density(grid, u);
    for (int m = 0; m < 16; ++m) {
        cd acc = 0.0;
        for (int j = 0; j < 16; ++j)
            acc += std::norm(u[j]) * std::exp(cd(0.0, -grid.k1(m) * grid.x1(j)));
        CHECK(std::abs(fk[m] - acc * grid.hx()) < 1e-12);
    }
    // At k = 0 the plain transform of |u|^2 is the total mass.
    CHECK(std::abs(fk[0] - norm_x_sq(grid, u)) < 1e-12);

    auto phi = random_field(rng, 16);
    auto sx = sum_over_k(grid, phi);
    for (int j = 0; j < 16; ++j) {
        cd acc = 0.0;
        for (int m = 0; m < 16; ++m)
            acc += phi[m] * std::exp(cd(0.0, grid.k1(m) * grid.x1(j)));
        CHECK(std::abs(sx[j] - acc * grid.hk()) < 1e-12);
    }
}

TEST_CASE("spectral derivative reproduces an exact harmonic derivative") {
    Grid grid(1, 64, 4.0);
    const double a = 3.0 * pi / grid.L();  // third grid harmonic
    cvec u(grid.size());
    for (int j = 0; j < grid.n(); ++j) u[j] = std::sin(a * grid.x1(j));
    auto du = spectral_derivative(grid, u, 0);
    // D = -i d/dx, so D sin(ax) = -i a cos(ax).
    for (int j = 0; j < grid.n(); ++j) {
        const cd expect = cd(0.0, -a * std::cos(a * grid.x1(j)));
        CHECK(std::abs(du[j] - expect) < 1e-10);
    }
}

TEST_CASE("space tags are enforced") {
    Grid grid(1, 16, 2.0);
    Field f{cvec(16, cd(1.0, 0.0)), Space::position};
    CHECK_THROWS_AS((void)unitary_ift(grid, f), ConfigError);
    f.space = Space::wavenumber;
    CHECK_THROWS_AS((void)unitary_ft(grid, f), ConfigError);
}

TEST_CASE("field maps: alpha to (A, dA/dt) and back") {
    std::mt19937_64 rng(4);
    Dispersion disp{1.0};

    SUBCASE("round trip is exact, including the Nyquist mode") {
        Grid grid(1, 32, 5.0);
        auto alpha = random_field(rng, 32);
        auto rf = state_to_real_fields(grid, alpha, disp);
        auto back = real_fields_to_alpha(grid, rf, disp);
        for (std::size_t i = 0; i < 32; ++i)
            CHECK(std::abs(back[i] - alpha[i]) < 1e-12);
    }

    SUBCASE("single excited mode gives the expected standing wave") {
        Grid grid(1, 32, 5.0);
        cvec alpha(32, cd(0.0, 0.0));
        const int mode = 2;
        const cd c(0.7, -0.4);
        alpha[mode] = c;
        const double k = grid.k1(mode);
        const double w = disp.omega(k);
        auto rf = state_to_real_fields(grid, alpha, disp);
        for (int j = 0; j < 32; ++j) {
            const cd ph = std::exp(cd(0.0, k * grid.x1(j)));
            const cd expect = std::pow(2.0 * pi, -0.5) * grid.hk() /
                              std::sqrt(2.0 * w) * (std::conj(c * ph) + c * ph);
            CHECK(std::abs(rf.A[j] - expect.real()) < 1e-13);
            CHECK(std::abs(expect.imag()) < 1e-13);
        }
    }
}
