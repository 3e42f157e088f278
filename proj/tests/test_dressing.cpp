#include <doctest.h>

#include <cmath>
#include <random>

#include "skg/dressing.hpp"
#include "test_util.hpp"

using namespace skg;
using testutil::random_cvec;
using testutil::random_smooth_state;

namespace {

double state_dist(const ClassicalState& a, const ClassicalState& b) {
    const Grid& g = *a.grid;
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        acc += g.hx() * std::norm(a.u[i] - b.u[i]);
        acc += g.hk() * std::norm(a.alpha[i] - b.alpha[i]);
    }
    return std::sqrt(acc);
}

}  // namespace

TEST_CASE("dressing map basics") {
    std::mt19937_64 rng(21);
    Grid grid(1, 256, 10.0);
    RenormParams p;
    p.d = 1;
    auto gk = g_on_grid(grid, SigmaVal::inf(), p);
    CHECK(g_has_even_modulus(grid, gk));

    auto z = random_smooth_state(grid, rng);

    SUBCASE("theta = 0 is the identity") {
        auto w = dress(z, gk, 0.0);
        CHECK(state_dist(w, z) == 0.0);
    }

    SUBCASE("pointwise modulus of u is preserved") {
        auto w = dress(z, gk, 1.3);
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(std::abs(std::abs(w.u[i]) - std::abs(z.u[i])) < 1e-14);
    }

    SUBCASE("alpha update is the closed form") {
        const double th = 0.8;
        auto w = dress(z, gk, th);
        auto F = plain_ft_density(grid, z.u);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const cd expect = z.alpha[i] + cd(0.0, -th) * gk[i] * F[i];
            CHECK(std::abs(w.alpha[i] - expect) < 1e-14);
        }
    }

    SUBCASE("involution and group property") {
        for (int trial = 0; trial < 20; ++trial) {
            auto w = random_smooth_state(grid, rng);
            CHECK(state_dist(dress(dress(w, gk, 1.0), gk, -1.0), w) < 1e-12);
            auto two_step = dress(dress(w, gk, 0.35), gk, 0.9);
            CHECK(state_dist(two_step, dress(w, gk, 1.25)) < 1e-12);
        }
    }

    SUBCASE("generator is conserved along its own flow") {
        for (double th : {0.2, 1.0, -2.5}) {
            const double before = dressing_functional(z, gk);
            const double after = dressing_functional(dress(z, gk, th), gk);
            CHECK(std::abs(after - before) <= 1e-10 * (1.0 + std::abs(before)));
        }
    }
}

TEST_CASE("general (non-even) kernels keep the group property") {
    std::mt19937_64 rng(22);
    Grid grid(1, 64, 6.0);
    cvec gk = random_cvec(rng, grid.size());
    for (auto& v : gk) v *= 0.2;
    CHECK_FALSE(g_has_even_modulus(grid, gk));

    auto z = random_smooth_state(grid, rng);
    auto two_step = dress(dress(z, gk, 0.6), gk, 0.7);
    CHECK(state_dist(two_step, dress(z, gk, 1.3)) < 1e-11);
    CHECK(state_dist(dress(dress(z, gk, 1.0), gk, -1.0), z) < 1e-11);
}

TEST_CASE("derivative of the dressing map") {
    std::mt19937_64 rng(23);
    Grid grid(1, 128, 8.0);
    RenormParams p;
    p.d = 1;
    auto gk = g_on_grid(grid, SigmaVal::finite(4.0), p);
    const double th = 0.7;

    auto z = random_smooth_state(grid, rng);
    Tangent t{random_smooth_state(grid, rng).u, random_smooth_state(grid, rng).alpha};

    SUBCASE("theta = 0 is the identity on tangents") {
        auto dt = dress_derivative(z, gk, 0.0, t);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(std::abs(dt.v[i] - t.v[i]) == 0.0);
            CHECK(std::abs(dt.beta[i] - t.beta[i]) == 0.0);
        }
    }

    SUBCASE("matches central finite differences at second order") {
        auto fd = [&](double h) {
            ClassicalState zp = z, zm = z;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                zp.u[i] += h * t.v[i];
                zp.alpha[i] += h * t.beta[i];
                zm.u[i] -= h * t.v[i];
                zm.alpha[i] -= h * t.beta[i];
            }
            auto wp = dress(zp, gk, th);
            auto wm = dress(zm, gk, th);
            Tangent out{cvec(grid.size()), cvec(grid.size())};
            for (std::size_t i = 0; i < grid.size(); ++i) {
                out.v[i] = (wp.u[i] - wm.u[i]) / (2.0 * h);
                out.beta[i] = (wp.alpha[i] - wm.alpha[i]) / (2.0 * h);
            }
            return out;
        };
        auto exact = dress_derivative(z, gk, th, t);
        auto err = [&](const Tangent& a) {
            double acc = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                acc += grid.hx() * std::norm(a.v[i] - exact.v[i]);
                acc += grid.hk() * std::norm(a.beta[i] - exact.beta[i]);
            }
            return std::sqrt(acc);
        };
        const double e3 = err(fd(1e-3));
        const double e4 = err(fd(1e-4));
        CHECK(e3 < 1e-4);
        CHECK(e4 < 1e-6);
        // second order: halving h by 10 shrinks the defect by ~100
        CHECK(e3 / e4 > 50.0);
        CHECK(e3 / e4 < 200.0);
    }

    SUBCASE("the derivative is symplectic") {
        for (int trial = 0; trial < 10; ++trial) {
            auto w = random_smooth_state(grid, rng);
            Tangent t1{random_smooth_state(grid, rng).u,
                       random_smooth_state(grid, rng).alpha};
            Tangent t2{random_smooth_state(grid, rng).u,
                       random_smooth_state(grid, rng).alpha};
            const double before = symplectic_form(grid, t1, t2);
            const double after = symplectic_form(grid, dress_derivative(w, gk, th, t1),
                                                 dress_derivative(w, gk, th, t2));
            CHECK(std::abs(after - before) <= 1e-10 * (1.0 + std::abs(before)));
        }
    }
}

TEST_CASE("growth bound report") {
    std::mt19937_64 rng(24);
    Grid grid(1, 128, 8.0);
    RenormParams p;
    p.d = 1;
    auto z = random_smooth_state(grid, rng);

    SUBCASE("theta = 0 and g = 0 are the identity map") {
        auto gk = g_on_grid(grid, SigmaVal::inf(), p);
        auto rep0 = growth_bound_check(z, gk, 0.0, 0.5, 0.5);
        CHECK(rep0.lambda == 1);
        CHECK(rep0.C == doctest::Approx(1.0).epsilon(1e-12));
        cvec zero(grid.size(), cd(0.0, 0.0));
        auto repz = growth_bound_check(z, zero, 1.0, 0.5, 0.5);
        CHECK(repz.lambda == 1);
        CHECK(repz.C == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("g = g_inf gives a finite stable exponent") {
        auto gk = g_on_grid(grid, SigmaVal::inf(), p);
        auto rep = growth_bound_check(z, gk, 1.0, 0.5, 0.5);
        CHECK(rep.stable);
        CHECK(rep.lambda >= 1);
        CHECK(rep.lambda <= 6);
        CHECK(rep.C > 0.0);
    }
}
