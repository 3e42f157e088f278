#include "skg/polysym.hpp"

#include <json.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "skg/kernels.hpp"

namespace skg {

namespace {

// plain transform h_x sum_x e^{-ikx} rho(x) for a complex density
cvec plain_ft_c(const Grid& g, const cvec& rho) {
    cvec out(g.size());
    g.dft(rho.data(), out.data(), -1);
    kernels::rmul(out.data(), g.ft_sign().data(), out.size());
    kernels::scale(out.data(), cd(g.hx(), 0.0), out.size());
    return out;
}

// per-axis integer DFT indices of a k-node (kcomp values are exact pi/L multiples)
std::vector<int> raw_k_indices(const Grid& g, std::size_t idx) {
    std::vector<int> r(g.d());
    for (int a = 0; a < g.d(); ++a) {
        const long m = std::lround(g.kcomp(a)[idx] * g.L() / pi);
        r[a] = static_cast<int>(((m % g.n()) + g.n()) % g.n());
    }
    return r;
}

std::size_t pack_raw(const std::vector<int>& r, int n) {
    std::size_t key = 0;
    for (int v : r) key = key * static_cast<std::size_t>(n) + static_cast<std::size_t>(v);
    return key;
}

Mono make_mono(std::initializer_list<int> created, std::initializer_list<int> annihilated, cd c) {
    Mono m;
    for (int j : created) ++m.mu[static_cast<std::size_t>(j)];
    for (int j : annihilated) ++m.nu[static_cast<std::size_t>(j)];
    m.c = c;
    return m;
}

bool key_less(const Mono& a, const Mono& b) {
    if (a.mu != b.mu) return a.mu < b.mu;
    return a.nu < b.nu;
}

}  // namespace

double ModeSet::orthonormality_defect() const {
    double worst = 0.0;
    for (int i = 0; i < n_nuc(); ++i)
        for (int j = i; j < n_nuc(); ++j) {
            const cd ip = inner_x(*grid, phi[static_cast<std::size_t>(i)],
                                  phi[static_cast<std::size_t>(j)]);
            worst = std::max(worst, std::abs(ip - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

ModeSet ModeSet::plane_waves(const Grid& g, int n_nuc, std::vector<std::size_t> knodes,
                             const RenormParams& p) {
    std::vector<std::size_t> order(g.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return g.ksq()[a] < g.ksq()[b]; });

    ModeSet ms;
    ms.grid = &g;
    const double norm = std::pow(2.0 * g.L(), -0.5 * g.d());
    for (int i = 0; i < n_nuc; ++i) {
        const std::size_t s = order[static_cast<std::size_t>(i)];
        cvec phi(g.size());
        for (std::size_t x = 0; x < g.size(); ++x) {
            double ph = 0.0;
            for (int a = 0; a < g.d(); ++a) ph += g.kcomp(a)[s] * g.xcomp(a)[x];
            phi[x] = norm * std::exp(cd(0.0, ph));
        }
        ms.phi.push_back(std::move(phi));
        ms.e_nuc.push_back(g.ksq()[s] / (2.0 * p.M));
    }
    const Dispersion disp = p.dispersion();
    for (std::size_t s : knodes) ms.omega.push_back(disp.omega_ksq(g.ksq()[s]));
    ms.knodes = std::move(knodes);
    return ms;
}

ModeSet ModeSet::harmonic(const Grid& g, int n_nuc, double w_trap,
                          std::vector<std::size_t> knodes, const RenormParams& p) {
    if (g.d() != 1) throw ConfigError("harmonic mode basis is one-dimensional");
    const int n = g.n();
    Eigen::MatrixXd H(n, n);
    for (int b = 0; b < n; ++b) {
        cvec col(static_cast<std::size_t>(n), cd(0.0, 0.0));
        col[static_cast<std::size_t>(b)] = 1.0;
        cvec lap = spectral_derivative(g, spectral_derivative(g, col, 0), 0);
        for (int a = 0; a < n; ++a) H(a, b) = lap[static_cast<std::size_t>(a)].real() / (2.0 * p.M);
        const double x = g.x1(b);
        H(b, b) += 0.5 * w_trap * w_trap * x * x;
    }
    H = 0.5 * (H + H.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);

    ModeSet ms;
    ms.grid = &g;
    const double scale = 1.0 / std::sqrt(g.hx());
    for (int i = 0; i < n_nuc; ++i) {
        Eigen::VectorXd v = es.eigenvectors().col(i);
        int peak = 0;
        v.cwiseAbs().maxCoeff(&peak);
        if (v(peak) < 0.0) v = -v;
        cvec phi(static_cast<std::size_t>(n));
        for (int a = 0; a < n; ++a) phi[static_cast<std::size_t>(a)] = scale * v(a);
        ms.phi.push_back(std::move(phi));
        ms.e_nuc.push_back(es.eigenvalues()(i));
    }
    const Dispersion disp = p.dispersion();
    for (std::size_t s : knodes) ms.omega.push_back(disp.omega_ksq(g.ksq()[s]));
    ms.knodes = std::move(knodes);
    return ms;
}

PolySymbol::PolySymbol(int nmodes) : nmodes_(nmodes) {
    if (nmodes < 0 || nmodes > kMaxModes)
        throw ConfigError("symbol mode count outside [0, " + std::to_string(kMaxModes) + "]");
}

void PolySymbol::add(const Mono& m) { terms_.push_back(m); }

void PolySymbol::add_real_pair(const Mono& m) {
    terms_.push_back(m);
    Mono conj_term;
    conj_term.mu = m.nu;
    conj_term.nu = m.mu;
    conj_term.c = std::conj(m.c);
    terms_.push_back(conj_term);
}

void PolySymbol::canon(double drop_tol) {
    std::sort(terms_.begin(), terms_.end(), key_less);
    std::vector<Mono> merged;
    for (const Mono& t : terms_) {
        if (!merged.empty() && merged.back().mu == t.mu && merged.back().nu == t.nu)
            merged.back().c += t.c;
        else
            merged.push_back(t);
    }
    std::erase_if(merged, [&](const Mono& t) { return std::abs(t.c) <= drop_tol; });
    terms_ = std::move(merged);
}

bool PolySymbol::is_real(double tol) const {
    for (const Mono& t : terms_) {
        Mono probe;
        probe.mu = t.nu;
        probe.nu = t.mu;
        auto it = std::lower_bound(terms_.begin(), terms_.end(), probe, key_less);
        const cd partner =
            (it != terms_.end() && it->mu == probe.mu && it->nu == probe.nu) ? it->c : cd(0.0);
        if (std::abs(partner - std::conj(t.c)) > tol * (1.0 + std::abs(t.c))) return false;
    }
    return true;
}

std::pair<int, int> PolySymbol::degree() const {
    int p = 0, q = 0;
    for (const Mono& t : terms_) {
        int dp = 0, dq = 0;
        for (int j = 0; j < kMaxModes; ++j) {
            dp += t.mu[static_cast<std::size_t>(j)];
            dq += t.nu[static_cast<std::size_t>(j)];
        }
        p = std::max(p, dp);
        q = std::max(q, dq);
    }
    return {p, q};
}

std::string PolySymbol::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const Mono& t : terms_) {
        nlohmann::json mu = nlohmann::json::array(), nu = nlohmann::json::array();
        for (int j = 0; j < nmodes_; ++j) {
            mu.push_back(t.mu[static_cast<std::size_t>(j)]);
            nu.push_back(t.nu[static_cast<std::size_t>(j)]);
        }
        arr.push_back({{"mu", mu}, {"nu", nu}, {"re", t.c.real()}, {"im", t.c.imag()}});
    }
    return arr.dump();
}

cd evaluate(const PolySymbol& sym, const cvec& z) {
    if (static_cast<int>(z.size()) != sym.nmodes())
        throw ConfigError("symbol evaluated with wrong mode count");
    cd acc = 0.0;
    for (const Mono& t : sym.terms()) {
        cd v = t.c;
        for (int j = 0; j < sym.nmodes(); ++j) {
            const std::size_t js = static_cast<std::size_t>(j);
            for (int r = 0; r < t.mu[js]; ++r) v *= std::conj(z[js]);
            for (int r = 0; r < t.nu[js]; ++r) v *= z[js];
        }
        acc += v;
    }
    return acc;
}

cvec gradient_zbar(const PolySymbol& sym, const cvec& z) {
    if (static_cast<int>(z.size()) != sym.nmodes())
        throw ConfigError("symbol evaluated with wrong mode count");
    cvec grad(z.size(), cd(0.0, 0.0));
    for (const Mono& t : sym.terms()) {
        for (int j = 0; j < sym.nmodes(); ++j) {
            const std::size_t js = static_cast<std::size_t>(j);
            if (t.mu[js] == 0) continue;
            cd v = t.c * static_cast<double>(t.mu[js]);
            for (int l = 0; l < sym.nmodes(); ++l) {
                const std::size_t ls = static_cast<std::size_t>(l);
                const int mpow = t.mu[ls] - (l == j ? 1 : 0);
                for (int r = 0; r < mpow; ++r) v *= std::conj(z[ls]);
                for (int r = 0; r < t.nu[ls]; ++r) v *= z[ls];
            }
            grad[js] += v;
        }
    }
    return grad;
}

PolySymbol reduce_energy(EnergyKind kind, const ModeSet& ms, const ExternalPotential& V,
                         const RenormParams& p, const ReduceOptions& opt) {
    const Grid& g = *ms.grid;
    const int nn = ms.n_nuc(), nm = ms.n_mes(), nt = ms.n_total();
    if (nt > kMaxModes) throw ConfigError("mode set exceeds the symbol capacity");
    PolySymbol sym(nt);

    const auto phi_at = [&](int i) -> const cvec& { return ms.phi[static_cast<std::size_t>(i)]; };
    const auto node_at = [&](int m) { return ms.knodes[static_cast<std::size_t>(m)]; };

    if (kind != EnergyKind::dressing_gen) {
        // nucleon (1,1) block in k-space, matching the grid kinetic evaluation
        std::vector<cvec> phik;
        for (int i = 0; i < nn; ++i) phik.push_back(to_k(g, phi_at(i)));
        const dvec vpot = V.kind == ExternalPotential::Kind::zero ? dvec() : V.values_on(g);
        for (int i = 0; i < nn; ++i)
            for (int j = 0; j < nn; ++j) {
                cd e = 0.0;
                for (std::size_t s = 0; s < g.size(); ++s)
                    e += g.ksq()[s] * std::conj(phik[static_cast<std::size_t>(i)][s]) *
                         phik[static_cast<std::size_t>(j)][s];
                e *= g.hk() / (2.0 * p.M);
                if (!vpot.empty()) {
                    cd pe = 0.0;
                    for (std::size_t s = 0; s < g.size(); ++s)
                        pe += vpot[s] * std::conj(phi_at(i)[s]) * phi_at(j)[s];
                    e += g.hx() * pe;
                }
                sym.add(make_mono({i}, {j}, e));
            }
        for (int m = 0; m < nm; ++m)
            sym.add(make_mono({nn + m}, {nn + m}, ms.omega[static_cast<std::size_t>(m)]));
    }
    if (kind == EnergyKind::free) {
        sym.canon();
        return sym;
    }

    // plain transforms of the mode densities, shared by every coupling term
    std::vector<std::vector<cvec>> Fg(static_cast<std::size_t>(nn));
    for (int i = 0; i < nn; ++i)
        for (int j = 0; j < nn; ++j) {
            cvec rho(g.size());
            for (std::size_t s = 0; s < g.size(); ++s)
                rho[s] = std::conj(phi_at(i)[s]) * phi_at(j)[s];
            Fg[static_cast<std::size_t>(i)].push_back(plain_ft_c(g, rho));
        }
    const double shk = std::sqrt(g.hk());

    if (kind == EnergyKind::dressing_gen) {
        const cvec gk = g_on_grid(g, opt.sigma, p);
        for (int m = 0; m < nm; ++m) {
            const std::size_t s = node_at(m);
            for (int i = 0; i < nn; ++i)
                for (int j = 0; j < nn; ++j)
                    sym.add_real_pair(make_mono(
                        {nn + m, i}, {j},
                        shk * gk[s] * Fg[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][s]));
        }
        sym.canon();
        return sym;
    }

    // Yukawa coupling (2,1)+(1,2): chi_sigma smearing for the undressed energy
    // (identically 1 at sigma = inf), chi_{sigma0} for the dressed one
    for (int m = 0; m < nm; ++m) {
        const std::size_t s = node_at(m);
        const double kn = std::sqrt(g.ksq()[s]);
        const double cw = std::pow(2.0 * pi, -0.5 * g.d()) /
                          std::sqrt(2.0 * ms.omega[static_cast<std::size_t>(m)]);
        double smear = chi_sigma(kn, opt.sigma);
        if (kind == EnergyKind::dressed) {
            smear = p.sigma0 > 0.0 ? chi_sigma(kn, SigmaVal::finite(p.sigma0)) : 0.0;
            if (opt.symmetrize_cross)
                smear += g.ksq()[s] * q_factor(kn, opt.sigma, p) / (2.0 * p.M);
        }
        for (int i = 0; i < nn; ++i)
            for (int j = 0; j < nn; ++j)
                sym.add_real_pair(make_mono(
                    {nn + m, i}, {j},
                    shk * cw * smear *
                        Fg[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][s]));
    }
    if (kind == EnergyKind::yukawa) {
        sym.canon();
        return sym;
    }

    // dressed extras: A_r^2 quadratic, D_x cross, pair potential
    const std::vector<dvec> rk = r_on_grid(g, opt.sigma, p);
    std::unordered_map<std::size_t, std::size_t> node_of;
    for (std::size_t s = 0; s < g.size(); ++s) node_of[pack_raw(raw_k_indices(g, s), g.n())] = s;
    const auto wrap_node = [&](int m, int sm, int mp, int smp) {
        const auto ra = raw_k_indices(g, node_at(m));
        const auto rb = raw_k_indices(g, node_at(mp));
        std::vector<int> rs(static_cast<std::size_t>(g.d()));
        for (int a = 0; a < g.d(); ++a) {
            const std::size_t as = static_cast<std::size_t>(a);
            rs[as] = ((sm * ra[as] + smp * rb[as]) % g.n() + g.n()) % g.n();
        }
        return node_of.at(pack_raw(rs, g.n()));
    };

    for (int m = 0; m < nm; ++m)
        for (int mp = 0; mp < nm; ++mp) {
            double rdot = 0.0;
            for (int a = 0; a < g.d(); ++a)
                rdot += rk[static_cast<std::size_t>(a)][node_at(m)] *
                        rk[static_cast<std::size_t>(a)][node_at(mp)];
            const double base = g.hk() / (2.0 * p.M) * rdot;
            if (base == 0.0) continue;
            const std::size_t spp = wrap_node(m, +1, mp, +1);
            const std::size_t spm = wrap_node(m, +1, mp, -1);
            const std::size_t smp = wrap_node(m, -1, mp, +1);
            const std::size_t smm = wrap_node(m, -1, mp, -1);
            for (int i = 0; i < nn; ++i)
                for (int j = 0; j < nn; ++j) {
                    const cvec& F = Fg[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                    sym.add(make_mono({nn + m, nn + mp, i}, {j}, base * F[spp]));
                    sym.add(make_mono({nn + m, i}, {nn + mp, j}, base * F[spm]));
                    sym.add(make_mono({nn + mp, i}, {nn + m, j}, base * F[smp]));
                    sym.add(make_mono({i}, {nn + m, nn + mp, j}, base * F[smm]));
                }
        }

    // cross term: one-sided r(k) alpha-bar e^{-ikx} u-bar D_x u as written, or
    // the integration-by-parts symmetrization toggled together with the
    // smearing shift above (equal values, different Wick images)
    std::vector<std::vector<cvec>> dphi(static_cast<std::size_t>(nn));
    for (int j = 0; j < nn; ++j)
        for (int a = 0; a < g.d(); ++a)
            dphi[static_cast<std::size_t>(j)].push_back(spectral_derivative(g, phi_at(j), a));
    for (int m = 0; m < nm; ++m) {
        const std::size_t s = node_at(m);
        for (int i = 0; i < nn; ++i)
            for (int j = 0; j < nn; ++j) {
                cd rd = 0.0;
                for (int a = 0; a < g.d(); ++a) {
                    const double ra = rk[static_cast<std::size_t>(a)][s];
                    if (ra == 0.0) continue;
                    cvec rho(g.size());
                    for (std::size_t x = 0; x < g.size(); ++x)
                        rho[x] = std::conj(phi_at(i)[x]) *
                                 dphi[static_cast<std::size_t>(j)][static_cast<std::size_t>(a)][x];
                    cd x1 = plain_ft_c(g, rho)[s];
                    if (opt.symmetrize_cross) {
                        for (std::size_t x = 0; x < g.size(); ++x)
                            rho[x] = std::conj(
                                         dphi[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)][x]) *
                                     phi_at(j)[x];
                        x1 = 0.5 * (x1 + plain_ft_c(g, rho)[s]);
                    }
                    rd += ra * x1;
                }
                if (rd != 0.0)
                    sym.add_real_pair(make_mono({nn + m, i}, {j}, -(shk / p.M) * rd));
            }
    }

    // pair term (2,2): (1/2) h_k sum_k Vhat |F(|u|^2)|^2
    const dvec vhat = vhat_on_grid(g, opt.sigma, p);
    for (int i = 0; i < nn; ++i)
        for (int j = 0; j < nn; ++j)
            for (int ip = 0; ip < nn; ++ip)
                for (int jp = 0; jp < nn; ++jp) {
                    cd c = 0.0;
                    for (std::size_t s = 0; s < g.size(); ++s)
                        c += vhat[s] *
                             Fg[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][s] *
                             std::conj(
                                 Fg[static_cast<std::size_t>(ip)][static_cast<std::size_t>(jp)][s]);
                    c *= 0.5 * g.hk();
                    sym.add(make_mono({i, jp}, {j, ip}, c));
                }

    sym.canon();
    return sym;
}

ClassicalState state_from_modes(const ModeSet& ms, const cvec& z) {
    if (static_cast<int>(z.size()) != ms.n_total())
        throw ConfigError("mode coefficient count mismatch");
    const Grid& g = *ms.grid;
    cvec u(g.size(), cd(0.0, 0.0)), alpha(g.size(), cd(0.0, 0.0));
    for (int i = 0; i < ms.n_nuc(); ++i)
        kernels::axpy(u.data(), z[static_cast<std::size_t>(i)],
                      ms.phi[static_cast<std::size_t>(i)].data(), g.size());
    const double shk = std::sqrt(g.hk());
    for (int m = 0; m < ms.n_mes(); ++m)
        alpha[ms.knodes[static_cast<std::size_t>(m)]] +=
            z[static_cast<std::size_t>(ms.n_nuc() + m)] / shk;
    return make_state(g, std::move(u), std::move(alpha));
}

}  // namespace skg
