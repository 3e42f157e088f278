#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>

#include "skg/fock.hpp"
#include "skg/kernels.hpp"
#include "test_util.hpp"

using namespace skg;

namespace {

Mono mono(std::initializer_list<int> mu, std::initializer_list<int> nu, cd c) {
    Mono m{};
    int i = 0;
    for (int v : mu) m.mu[static_cast<std::size_t>(i++)] = static_cast<std::uint8_t>(v);
    i = 0;
    for (int v : nu) m.nu[static_cast<std::size_t>(i++)] = static_cast<std::uint8_t>(v);
    m.c = c;
    return m;
}

Eigen::MatrixXcd dense(const SparseOp& a) {
    const cvec d = a.to_dense();
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(a.n), static_cast<Eigen::Index>(a.n));
    for (std::size_t r = 0; r < a.n; ++r)
        for (std::size_t c = 0; c < a.n; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = d[r * a.n + c];
    return m;
}

double vec_dist(const cvec& a, const cvec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

// single nucleon mode in a unit trap plus one or more meson nodes
struct Setup {
    RenormParams p;
    Grid grid;
    ModeSet ms;
    Setup(double sigma0, std::vector<std::size_t> nodes)
        : p{}, grid(1, 64, 8.0), ms((p.d = 1, p.sigma0 = sigma0,
                                     ModeSet::harmonic(grid, 1, 1.0, std::move(nodes), p))) {}
};

}  // namespace

TEST_CASE("occupation basis enumeration and index maps") {
    Setup s(0.25, {1});
    auto f1 = FockSpace::build(s.ms, {3, 0}, 3, 0.5);
    CHECK(f1.dim() == 4);

    auto f = FockSpace::build(s.ms, {2, 2}, 3, 0.5);
    CHECK(f.dim() == 8);  // 3x3 tuples minus (2,2)
    for (std::size_t i = 0; i < f.dim(); ++i) {
        CHECK(f.index.at(f.basis[i]) == i);
        CHECK(f.total_quanta(i) <= 3);
        CHECK(f.occ(i, 0) <= 2);
        CHECK(f.occ(i, 1) <= 2);
    }

    CHECK_THROWS_AS(FockSpace::build(s.ms, {2}, 3, 0.5), ConfigError);
    CHECK_THROWS_AS(FockSpace::build(s.ms, {2, 2}, 3, -1.0), ConfigError);
}

TEST_CASE("ladder operators scale by sqrt(eps n) and satisfy the CCR below cap") {
    Setup s(0.25, {1});
    const double eps = 0.3;
    auto f = FockSpace::build(s.ms, {3, 3}, 6, eps);

    // single-mode block: explicit matrix for the nucleon mode on pure states
    auto a = annihilator(f, 0);
    auto ad = creator(f, 0);
    for (int n = 1; n <= 3; ++n) {
        cvec e(f.dim(), cd(0.0, 0.0));
        const std::uint64_t packed = static_cast<std::uint64_t>(n);
        e[f.index.at(packed)] = 1.0;
        const cvec lo = a.apply(e);
        CHECK(std::abs(lo[f.index.at(packed - 1)] - std::sqrt(eps * n)) <= 1e-14);
    }

    // commutator on every basis state below every cap
    auto comm = op_add(op_mul(a, ad), op_mul(ad, a), -1.0);
    for (std::size_t i = 0; i < f.dim(); ++i) {
        cvec e(f.dim(), cd(0.0, 0.0));
        e[i] = 1.0;
        const cvec c = comm.apply(e);
        if (f.occ(i, 0) < 3 && f.total_quanta(i) < 6) {
            for (std::size_t j = 0; j < f.dim(); ++j)
                CHECK(std::abs(c[j] - (i == j ? cd(eps, 0.0) : cd(0.0, 0.0))) <= 1e-14);
        }
    }

    // N = a*a has the eps-spaced spectrum
    auto num = op_mul(ad, a);
    for (std::size_t i = 0; i < f.dim(); ++i) {
        cvec e(f.dim(), cd(0.0, 0.0));
        e[i] = 1.0;
        const cvec c = num.apply(e);
        CHECK(std::abs(c[i] - eps * static_cast<double>(f.occ(i, 0))) <= 1e-14);
    }
}

TEST_CASE("wick quantization: number operator, free diagonal, brute-force oracle") {
    Setup s(0.25, {1, 2});
    const double eps = 0.5;
    auto f = FockSpace::build(s.ms, {3, 3, 3}, 5, eps);

    // nucleon-mass symbol quantizes to N1
    PolySymbol massym(3);
    massym.add(mono({1, 0, 0}, {1, 0, 0}, 1.0));
    auto n1a = wick(f, massym);
    auto n1b = nucleon_number(f);
    CHECK((dense(n1a) - dense(n1b)).cwiseAbs().maxCoeff() <= 1e-15);

    // free symbol is diagonal with dGamma energies
    const auto V = ExternalPotential::harmonic(1.0);
    auto h0 = wick(f, reduce_energy(EnergyKind::free, s.ms, V, s.p));
    const auto h0d = dense(h0);
    for (std::size_t i = 0; i < f.dim(); ++i) {
        double e = s.ms.e_nuc[0] * eps * f.occ(i, 0);
        for (int m = 0; m < 2; ++m)
            e += s.ms.omega[static_cast<std::size_t>(m)] * eps * f.occ(i, m + 1);
        for (std::size_t j = 0; j < f.dim(); ++j) {
            const cd want = i == j ? cd(e, 0.0) : cd(0.0, 0.0);
            CHECK(std::abs(h0d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                           want) <= 1e-12);
        }
    }

    // hand-ordered cubic against the ladder-product construction
    PolySymbol cub(3);
    const cd c(0.7, -0.4);
    cub.add(mono({2, 0, 0}, {1, 1, 0}, c));
    auto lhs = dense(wick(f, cub));
    auto ad0 = dense(creator(f, 0));
    auto a0 = dense(annihilator(f, 0));
    auto a1 = dense(annihilator(f, 1));
    Eigen::MatrixXcd rhs = c * ad0 * ad0 * a0 * a1;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-13);

    PolySymbol wrong(2);
    CHECK_THROWS_AS(wick(f, wrong), ConfigError);
}

TEST_CASE("weyl operators: identity, inverse, composition phase") {
    Setup s(0.25, {1});
    const double eps = 0.25;
    auto f = FockSpace::build(s.ms, {40, 0}, 40, eps);  // single live mode

    auto psi0 = coherent_state(f, {cd(0.3, 0.0), cd(0.0, 0.0)}).amp;
    CHECK(vec_dist(apply_weyl(f, {cd(0.0, 0.0), cd(0.0, 0.0)}, psi0), psi0) <= 1e-13);

    const cvec xa{cd(0.6, 0.8), cd(0.0, 0.0)};  // |xa| = 1
    cvec xa_neg = xa;
    for (cd& v : xa_neg) v = -v;
    const cvec wpsi = apply_weyl(f, xa, psi0);
    CHECK(std::abs(kernels::nrm2sq(wpsi.data(), wpsi.size()) - 1.0) <= 1e-10);
    CHECK(vec_dist(apply_weyl(f, xa_neg, wpsi), psi0) <= 1e-10);

    // W(xa) W(xb) = e^{-(i/2) eps Im<xa, xb>} W(xa + xb)
    const cvec xb{cd(-0.3, 0.4), cd(0.0, 0.0)};
    cvec xab(2);
    for (int i = 0; i < 2; ++i) xab[static_cast<std::size_t>(i)] =
        xa[static_cast<std::size_t>(i)] + xb[static_cast<std::size_t>(i)];
    const cd phase =
        std::exp(cd(0.0, -0.5 * eps * std::imag(std::conj(xa[0]) * xb[0])));
    const cvec lhs = apply_weyl(f, xa, apply_weyl(f, xb, psi0));
    cvec rhs = apply_weyl(f, xab, psi0);
    for (cd& v : rhs) v *= phase;
    CHECK(vec_dist(lhs, rhs) <= 1e-8);

    // mixed nucleon/meson displacement keeps the stated factor order unitary
    auto f2 = FockSpace::build(s.ms, {10, 10}, 12, 0.2);
    auto chi = coherent_state(f2, {cd(0.2, 0.1), cd(-0.1, 0.15)}).amp;
    const cvec xm{cd(0.3, -0.2), cd(0.25, 0.1)};
    const cvec wchi = apply_weyl(f2, xm, chi);
    CHECK(std::abs(kernels::nrm2sq(wchi.data(), wchi.size()) - 1.0) <= 1e-10);

    cvec huge{cd(40.0, 0.0), cd(0.0, 0.0)};
    CHECK_THROWS_AS(apply_weyl(f, huge, psi0), NumericError);
}

TEST_CASE("coherent states: moments, ladder eigenvalue, characteristic function") {
    Setup s(0.25, {1});
    const double eps = 0.25;
    auto f = FockSpace::build(s.ms, {30, 30}, 30, eps);

    auto vac = coherent_state(f, {cd(0.0, 0.0), cd(0.0, 0.0)});
    CHECK(std::abs(vac.amp[f.index.at(0)] - 1.0) <= 1e-13);
    CHECK(std::abs(vac.norm() - 1.0) <= 1e-12);

    const cvec z0{cd(0.4, -0.2), cd(0.3, 0.25)};
    auto psi = coherent_state(f, z0);
    CHECK(std::abs(psi.norm() - 1.0) <= 1e-12);

    double zn2 = 0.0;
    for (const cd& v : z0) zn2 += std::norm(v);
    auto ntot = op_add(op_mul(creator(f, 0), annihilator(f, 0)),
                       op_mul(creator(f, 1), annihilator(f, 1)));
    const cvec npsi = ntot.apply(psi.amp);
    CHECK(std::abs(kernels::dot(psi.amp.data(), npsi.data(), f.dim()).real() - zn2) <= 1e-9);

    for (int m = 0; m < 2; ++m) {
        const cvec apsi = annihilator(f, m).apply(psi.amp);
        cvec want = psi.amp;
        kernels::scale(want.data(), z0[static_cast<std::size_t>(m)], want.size());
        CHECK(vec_dist(apsi, want) <= 1e-8);
    }

    const cvec xi{cd(0.5, 0.3), cd(-0.2, 0.6)};
    const cvec wpsi = apply_weyl(f, xi, psi.amp);
    const cd got = kernels::dot(psi.amp.data(), wpsi.data(), f.dim());
    cd xz(0.0, 0.0);
    double xn2 = 0.0;
    for (int m = 0; m < 2; ++m) {
        xz += std::conj(xi[static_cast<std::size_t>(m)]) * z0[static_cast<std::size_t>(m)];
        xn2 += std::norm(xi[static_cast<std::size_t>(m)]);
    }
    const cd want = std::exp(cd(-eps * xn2 / 4.0, std::sqrt(2.0) * xz.real()));
    CHECK(std::abs(got - want) <= 1e-8);

    // truncation error on the characteristic function halves (at least) with caps
    const auto viol = [&](int cap) {
        auto fc = FockSpace::build(s.ms, {cap, cap}, cap, eps);
        auto pc = coherent_state(fc, z0);
        const cvec wc = apply_weyl(fc, xi, pc.amp);
        return std::abs(kernels::dot(pc.amp.data(), wc.data(), fc.dim()) - want);
    };
    const double v6 = viol(6), v12 = viol(12);
    CHECK(v6 > 1e-13);
    CHECK(v12 <= 0.5 * v6);

    CHECK_THROWS_AS(coherent_state(f, {cd(3.0, 0.0), cd(0.0, 0.0)}), NumericError);
}

TEST_CASE("sector bound arithmetic and the renormalized hamiltonian structure") {
    CHECK(sector_bound(1.0, 6.0, 1.0) == 1);
    CHECK(sector_bound(1.0, 1.9, 1.0) == 0);
    CHECK(sector_bound(1.0, 2.0, 1.0) == 0);
    CHECK(sector_bound(0.5, 8.0, 1.0) == 5);
    CHECK(sector_bound(0.25, 4.0, 1.0) == 3);
    CHECK_THROWS_AS(sector_bound(0.0, 4.0, 1.0), ConfigError);

    Setup s(0.25, {1, 2});
    const auto V = ExternalPotential::harmonic(1.0);
    auto f = FockSpace::build(s.ms, {3, 3, 3}, 5, 0.5);

    // sigma0 <= 2K: every n >= 1 nucleon sector acts as zero
    auto hs0 = build_hamiltonians(f, V, s.p, 1.0);
    CHECK(hs0.frak_n == 0);
    for (std::size_t r = 0; r < f.dim(); ++r)
        for (std::size_t k = hs0.h_hat.row_ptr[r]; k < hs0.h_hat.row_ptr[r + 1]; ++k) {
            CHECK(f.nucleon_quanta(r) == 0);
            CHECK(f.nucleon_quanta(hs0.h_hat.col[k]) == 0);
        }

    // small K keeps three sectors live
    auto hs = build_hamiltonians(f, V, s.p, 0.02);
    CHECK(hs.frak_n >= 3);
    CHECK(hs.h_hat.hermiticity_defect() <= 1e-12);
    CHECK(hs.t_inf.hermiticity_defect() <= 1e-12);

    auto n1 = nucleon_number(f);
    auto commh = op_add(op_mul(hs.h_hat, n1), op_mul(n1, hs.h_hat), -1.0);
    auto commt = op_add(op_mul(hs.t_inf, n1), op_mul(n1, hs.t_inf), -1.0);
    CHECK(commh.inf_norm() == 0.0);
    CHECK(commt.inf_norm() == 0.0);

    // eq. 61 conjugation preserves the spectrum
    const cvec hr = h_ren_dense(f, hs);
    Eigen::MatrixXcd hrm(static_cast<Eigen::Index>(f.dim()),
                         static_cast<Eigen::Index>(f.dim()));
    for (std::size_t r = 0; r < f.dim(); ++r)
        for (std::size_t c = 0; c < f.dim(); ++c)
            hrm(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                hr[r * f.dim() + c];
    CHECK((hrm - hrm.adjoint()).cwiseAbs().maxCoeff() <= 1e-11);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(dense(hs.h_hat));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eb(hrm);
    CHECK((ea.eigenvalues() - eb.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-9);

    auto fbig = FockSpace::build(s.ms, {30, 30, 30}, 30, 0.5);
    CHECK_THROWS_AS(build_hamiltonians(fbig, V, s.p, 1.0), ConfigError);
}

TEST_CASE("propagation: phases, unitarity, nucleon number conservation") {
    Setup s(0.25, {1, 2});
    const auto V = ExternalPotential::harmonic(1.0);
    const double eps = 0.25;
    auto f = FockSpace::build(s.ms, {4, 4, 4}, 6, eps);

    // zero coupling gives the diagonal free Hamiltonian: exact mode phases
    RenormParams pfree = s.p;
    pfree.sigma0 = 100.0;  // keep every sector live
    auto hs_free = build_hamiltonians(f, V, pfree, 1.0, false);
    const double t = 0.7;
    for (std::size_t i : {std::size_t{0}, std::size_t{3}, f.dim() - 1}) {
        cvec e(f.dim(), cd(0.0, 0.0));
        e[i] = 1.0;
        double en = s.ms.e_nuc[0] * eps * f.occ(i, 0);
        for (int m = 0; m < 2; ++m)
            en += s.ms.omega[static_cast<std::size_t>(m)] * eps * f.occ(i, m + 1);
        const cvec got = propagate(f, hs_free.h_hat, t, e);
        cvec want = e;
        kernels::scale(want.data(), std::exp(cd(0.0, -t * en / eps)), want.size());
        CHECK(vec_dist(got, want) <= 1e-11);
    }

    auto hs = build_hamiltonians(f, V, s.p, 0.02);
    auto psi = coherent_state(f, {cd(0.3, 0.1), cd(0.2, -0.15), cd(-0.1, 0.2)});
    CHECK(vec_dist(propagate_ren(f, hs, 0.0, psi.amp), psi.amp) <= 1e-10);

    const cvec evolved = propagate_ren(f, hs, 0.4, psi.amp);
    CHECK(std::abs(kernels::nrm2sq(evolved.data(), evolved.size()) - 1.0) <= 1e-10);
    auto n1 = nucleon_number(f);
    const cvec na = n1.apply(psi.amp), nb = n1.apply(evolved);
    const double va = kernels::dot(psi.amp.data(), na.data(), f.dim()).real();
    const double vb = kernels::dot(evolved.data(), nb.data(), f.dim()).real();
    CHECK(std::abs(va - vb) <= 1e-10);
}

namespace {

// || P_low (H_hat - U_sigma (H_sigma - eps E_sigma N1) U*_sigma) P_low ||
double eq7_metric(const ModeSet& ms, const ExternalPotential& V, const RenormParams& p,
                  double sigma, double eps, int cap, int low_cap, double e_subtract) {
    auto f = FockSpace::build(ms, std::vector<int>(static_cast<std::size_t>(ms.n_total()), cap),
                              cap + 2, eps);
    auto hs = build_hamiltonians(f, V, p, 0.01);  // tiny K keeps every sector live
    ReduceOptions ro;
    ro.sigma = SigmaVal::finite(sigma);
    auto h_sig = wick(f, reduce_energy(EnergyKind::yukawa, ms, V, p, ro));
    auto t_sig = wick(f, reduce_energy(EnergyKind::dressing_gen, ms, V, p, ro));
    auto x = op_add(h_sig, nucleon_number(f), cd(-eps * e_subtract, 0.0));

    std::vector<std::size_t> low;
    for (std::size_t i = 0; i < f.dim(); ++i)
        if (f.total_quanta(i) <= low_cap) low.push_back(i);
    const auto nl = static_cast<Eigen::Index>(low.size());
    Eigen::MatrixXcd m(nl, nl);
    for (Eigen::Index j = 0; j < nl; ++j) {
        cvec e(f.dim(), cd(0.0, 0.0));
        e[low[static_cast<std::size_t>(j)]] = 1.0;
        cvec v = expi_action(t_sig, -1.0 / eps, e);
        v = x.apply(v);
        v = expi_action(t_sig, 1.0 / eps, v);
        const cvec w = hs.h_hat.apply(e);
        for (Eigen::Index i = 0; i < nl; ++i)
            m(i, j) = w[low[static_cast<std::size_t>(i)]] - v[low[static_cast<std::size_t>(i)]];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()));
    double top = 0.0;
    for (Eigen::Index i = 0; i < nl; ++i) top = std::max(top, std::abs(es.eigenvalues()(i)));
    return top;
}

}  // namespace

TEST_CASE("truncated eq. 7 analog: cap convergence, eps scaling, counterterm role") {
    // meson nodes cover the whole spectral support of chi_{sigma0} and q_sigma,
    // so the only truncations left are the occupation caps and the single
    // trapped nucleon mode
    RenormParams p;
    p.d = 1;
    p.sigma0 = 0.25;
    Grid grid(1, 64, 8.0);
    auto ms = ModeSet::harmonic(grid, 1, 1.0, {1, 63, 2, 62, 3, 61, 0}, p);
    const auto V = ExternalPotential::harmonic(1.0);
    const double sigma = 0.7;
    const double es = self_energy(SigmaVal::finite(sigma), p);

    // the metric converges as caps grow: increments die off fast while the
    // value itself plateaus at a structural O(eps) constant (normal-ordering
    // corrections of the conjugation, which the untruncated continuum
    // identity cancels but the truncated analog cannot)
    const double m1 = eq7_metric(ms, V, p, sigma, 1.0, 1, 2, es);
    const double m2 = eq7_metric(ms, V, p, sigma, 1.0, 2, 2, es);
    const double m3 = eq7_metric(ms, V, p, sigma, 1.0, 3, 2, es);
    CHECK(std::abs(m2 - m1) > 1e-12);
    CHECK(std::abs(m3 - m2) <= 0.05 * std::abs(m2 - m1));
    CHECK(m3 <= 0.1);

    // the plateau shrinks with eps
    const double m3h = eq7_metric(ms, V, p, sigma, 0.5, 3, 2, es);
    CHECK(m3h <= 0.5 * m3);

    // removing the counterterm visibly worsens the match
    const double m2_no_ct = eq7_metric(ms, V, p, sigma, 1.0, 2, 2, 0.0);
    CHECK(m2_no_ct >= 1.5 * m2);
}

TEST_CASE("correspondence experiment: gaussian start, eps trend, free control") {
    RenormParams p;
    p.d = 1;
    p.sigma0 = 4.0;
    Grid grid(1, 64, 8.0);
    auto ms = ModeSet::harmonic(grid, 1, 1.0, {13}, p);

    CorrespondenceConfig cfg;
    cfg.z0 = {cd(0.15, 0.05), cd(0.2, -0.1)};
    cfg.xi = {cd(0.4, 0.0), cd(0.3, 0.2)};
    cfg.t_grid = {0.0, 0.25};
    cfg.eps_list = {0.4, 0.1};
    cfg.n_max = 10;
    cfg.classical.dt = 1e-3;

    const auto V = ExternalPotential::harmonic(1.0);
    auto rows = correspondence_experiment(ms, V, p, cfg);
    REQUIRE(rows.size() == 4);

    double xn2 = 0.0;
    for (const cd& v : cfg.xi) xn2 += std::norm(v);
    for (const auto& r : rows) {
        CHECK(r.basis_dim == 66);
        CHECK(std::abs(r.Q) <= 1.0 + 1e-9);
        CHECK(r.cap_violation <= 1e-6);
        if (r.t == 0.0)
            CHECK(std::abs(r.err - (1.0 - std::exp(-r.eps * xn2 / 4.0))) <= 5e-3);
    }
    // quantum-classical gap shrinks with eps at the evolved time
    CHECK(rows[3].err < rows[1].err);
    CHECK(rows[3].err < 0.15);

    // zero-coupling control: exact free Gaussian characteristic function
    CorrespondenceConfig ctrl = cfg;
    ctrl.coupling_on = false;
    ctrl.z0 = {cd(0.0, 0.0), cd(0.2, -0.1)};
    auto crows = correspondence_experiment(ms, V, p, ctrl);
    for (const auto& r : crows)
        CHECK(std::abs(r.err - (1.0 - std::exp(-r.eps * xn2 / 4.0))) <= 1e-6);

    CorrespondenceConfig bad = cfg;
    bad.eps_list = {-0.1};
    CHECK_THROWS_AS(correspondence_experiment(ms, V, p, bad), ConfigError);
}
