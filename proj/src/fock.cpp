#include "skg/fock.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <tuple>

#include "skg/kernels.hpp"

namespace skg {

namespace {

constexpr int kOccBits = 8;
constexpr int kOccMax = 200;  // per-mode packing limit

int occ_of(std::uint64_t packed, int mode) {
    return static_cast<int>((packed >> (kOccBits * mode)) & 0xffu);
}

std::uint64_t shifted(std::uint64_t packed, int mode, int delta) {
    const std::uint64_t unit = std::uint64_t{1} << (kOccBits * mode);
    return delta >= 0 ? packed + unit * static_cast<std::uint64_t>(delta)
                      : packed - unit * static_cast<std::uint64_t>(-delta);
}

struct Trip {
    std::size_t r, c;
    cd v;
};

SparseOp csr_from(std::size_t n, std::vector<Trip> trips) {
    std::sort(trips.begin(), trips.end(), [](const Trip& a, const Trip& b) {
        return a.r != b.r ? a.r < b.r : a.c < b.c;
    });
    SparseOp op;
    op.n = n;
    op.row_ptr.assign(n + 1, 0);
    std::size_t i = 0;
    while (i < trips.size()) {
        std::size_t j = i + 1;
        cd sum = trips[i].v;
        while (j < trips.size() && trips[j].r == trips[i].r && trips[j].c == trips[i].c)
            sum += trips[j++].v;
        if (sum != cd(0.0, 0.0)) {
            op.col.push_back(trips[i].c);
            op.val.push_back(sum);
            ++op.row_ptr[trips[i].r + 1];
        }
        i = j;
    }
    for (std::size_t r = 0; r < n; ++r) op.row_ptr[r + 1] += op.row_ptr[r];
    return op;
}

// S = (1/sqrt2) (a*(xi) + a(xi)) over modes [lo, hi), Hermitian
SparseOp field_generator(const FockSpace& f, const cvec& xi, int lo, int hi) {
    const double s2 = 1.0 / std::sqrt(2.0);
    std::vector<Trip> trips;
    for (std::size_t i = 0; i < f.dim(); ++i) {
        const int total = f.total_quanta(i);
        for (int m = lo; m < hi; ++m) {
            if (xi[static_cast<std::size_t>(m)] == cd(0.0, 0.0)) continue;
            const int n = f.occ(i, m);
            if (n >= 1) {
                const auto it = f.index.find(shifted(f.basis[i], m, -1));
                trips.push_back({it->second, i,
                                 s2 * std::conj(xi[static_cast<std::size_t>(m)]) *
                                     std::sqrt(f.eps * n)});
            }
            if (n < f.caps[static_cast<std::size_t>(m)] && total < f.n_max) {
                const auto it = f.index.find(shifted(f.basis[i], m, +1));
                trips.push_back({it->second, i,
                                 s2 * xi[static_cast<std::size_t>(m)] *
                                     std::sqrt(f.eps * (n + 1))});
            }
        }
    }
    return csr_from(f.dim(), std::move(trips));
}

using Mat = Eigen::MatrixXcd;
using MatR = Eigen::MatrixXd;

Mat dense_of(const SparseOp& a) {
    Mat m = Mat::Zero(static_cast<Eigen::Index>(a.n), static_cast<Eigen::Index>(a.n));
    for (std::size_t r = 0; r < a.n; ++r)
        for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(a.col[k])) = a.val[k];
    return m;
}

// one Lanczos substep with full reorthogonalization; returns false when the
// Krylov space hit m_max without meeting the tolerance
bool lanczos_substep(const SparseOp& h, double tau, cvec& psi, int m_max, double tol) {
    const std::size_t n = h.n;
    const double bnorm = std::sqrt(kernels::nrm2sq(psi.data(), n));
    if (bnorm == 0.0) return true;

    std::vector<cvec> v;
    v.reserve(static_cast<std::size_t>(m_max));
    v.push_back(psi);
    kernels::scale(v[0].data(), 1.0 / bnorm, n);
    dvec alpha, beta;  // tridiagonal entries
    cvec w(n);
    Eigen::VectorXcd y;

    for (int j = 0; j < m_max; ++j) {
        h.apply(v[static_cast<std::size_t>(j)].data(), w.data());
        const double aj = kernels::dot(v[static_cast<std::size_t>(j)].data(), w.data(), n).real();
        alpha.push_back(aj);
        for (int pass = 0; pass < 2; ++pass)
            for (const cvec& q : v) {
                const cd c = kernels::dot(q.data(), w.data(), n);
                kernels::axpy(w.data(), -c, q.data(), n);
            }
        const double bj = std::sqrt(kernels::nrm2sq(w.data(), n));
        const int m = j + 1;

        // exponential of the m-by-m real symmetric tridiagonal block
        MatR t = MatR::Zero(m, m);
        for (int r = 0; r < m; ++r) {
            t(r, r) = alpha[static_cast<std::size_t>(r)];
            if (r + 1 < m) t(r, r + 1) = t(r + 1, r) = beta[static_cast<std::size_t>(r)];
        }
        Eigen::SelfAdjointEigenSolver<MatR> es(t);
        Eigen::VectorXcd phases(m);
        for (int r = 0; r < m; ++r)
            phases(r) = std::exp(cd(0.0, tau * es.eigenvalues()(r)));
        y = es.eigenvectors().cast<cd>() *
            phases.cwiseProduct(es.eigenvectors().row(0).transpose().cast<cd>());

        const double err = bj * std::abs(y(m - 1)) * std::min(std::abs(tau), 1.0);
        if (err <= tol || bj <= 1e-14 * (1.0 + std::abs(aj))) {
            std::fill(psi.begin(), psi.end(), cd(0.0, 0.0));
            for (int r = 0; r < m; ++r)
                kernels::axpy(psi.data(), bnorm * y(r), v[static_cast<std::size_t>(r)].data(), n);
            return true;
        }
        beta.push_back(bj);
        kernels::scale(w.data(), 1.0 / bj, n);
        v.push_back(w);
    }
    return false;
}

}  // namespace

FockSpace FockSpace::build(const ModeSet& ms, std::vector<int> caps, int n_max, double eps) {
    if (static_cast<int>(caps.size()) != ms.n_total())
        throw ConfigError("fock: caps size must match the mode count");
    for (int c : caps)
        if (c < 0 || c > kOccMax) throw ConfigError("fock: per-mode cap out of range");
    if (n_max < 0) throw ConfigError("fock: total cap must be nonnegative");
    if (!(eps > 0.0)) throw ConfigError("fock: eps must be positive");

    FockSpace f;
    f.modes = &ms;
    f.caps = std::move(caps);
    f.n_max = n_max;
    f.eps = eps;

    const int nm = ms.n_total();
    std::vector<int> occ(static_cast<std::size_t>(nm), 0);
    const auto enumerate = [&](auto&& self, int mode, int used, std::uint64_t packed) -> void {
        if (mode == nm) {
            f.basis.push_back(packed);
            if (f.basis.size() > 200000) throw ConfigError("fock: basis exceeds 200000 states");
            return;
        }
        const int top = std::min(f.caps[static_cast<std::size_t>(mode)], f.n_max - used);
        for (int n = 0; n <= top; ++n)
            self(self, mode + 1, used + n,
                 packed + (static_cast<std::uint64_t>(n) << (kOccBits * mode)));
    };
    enumerate(enumerate, 0, 0, 0);
    std::sort(f.basis.begin(), f.basis.end());
    f.index.reserve(f.basis.size());
    for (std::size_t i = 0; i < f.basis.size(); ++i) f.index.emplace(f.basis[i], i);
    return f;
}

int FockSpace::total_quanta(std::size_t i) const {
    int t = 0;
    for (int m = 0; m < modes->n_total(); ++m) t += occ(i, m);
    return t;
}

int FockSpace::nucleon_quanta(std::size_t i) const {
    int t = 0;
    for (int m = 0; m < modes->n_nuc(); ++m) t += occ(i, m);
    return t;
}

bool FockSpace::at_boundary(std::size_t i) const {
    if (total_quanta(i) == n_max) return true;
    for (int m = 0; m < modes->n_total(); ++m)
        if (occ(i, m) == caps[static_cast<std::size_t>(m)]) return true;
    return false;
}

void SparseOp::apply(const cd* x, cd* y) const {
    for (std::size_t r = 0; r < n; ++r) {
        cd s(0.0, 0.0);
        for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += val[k] * x[col[k]];
        y[r] = s;
    }
}

cvec SparseOp::apply(const cvec& x) const {
    cvec y(n);
    apply(x.data(), y.data());
    return y;
}

SparseOp SparseOp::adjoint() const {
    std::vector<Trip> trips;
    trips.reserve(nnz());
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
            trips.push_back({col[k], r, std::conj(val[k])});
    return csr_from(n, std::move(trips));
}

cvec SparseOp::to_dense() const {
    cvec m(n * n, cd(0.0, 0.0));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) m[r * n + col[k]] = val[k];
    return m;
}

double SparseOp::hermiticity_defect() const {
    const SparseOp at = adjoint();
    double worst = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        std::size_t ka = row_ptr[r], kb = at.row_ptr[r];
        const std::size_t ea = row_ptr[r + 1], eb = at.row_ptr[r + 1];
        while (ka < ea || kb < eb) {
            if (kb == eb || (ka < ea && col[ka] < at.col[kb]))
                worst = std::max(worst, std::abs(val[ka++]));
            else if (ka == ea || at.col[kb] < col[ka])
                worst = std::max(worst, std::abs(at.val[kb++]));
            else {
                worst = std::max(worst, std::abs(val[ka++] - at.val[kb++]));
            }
        }
    }
    return worst;
}

double SparseOp::inf_norm() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double s = 0.0;
        for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += std::abs(val[k]);
        worst = std::max(worst, s);
    }
    return worst;
}

SparseOp op_add(const SparseOp& a, const SparseOp& b, cd sb) {
    std::vector<Trip> trips;
    trips.reserve(a.nnz() + b.nnz());
    for (std::size_t r = 0; r < a.n; ++r)
        for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
            trips.push_back({r, a.col[k], a.val[k]});
    for (std::size_t r = 0; r < b.n; ++r)
        for (std::size_t k = b.row_ptr[r]; k < b.row_ptr[r + 1]; ++k)
            trips.push_back({r, b.col[k], sb * b.val[k]});
    return csr_from(a.n, std::move(trips));
}

SparseOp op_mul(const SparseOp& a, const SparseOp& b) {
    std::vector<Trip> trips;
    cvec acc(a.n, cd(0.0, 0.0));
    std::vector<std::size_t> touched;
    for (std::size_t r = 0; r < a.n; ++r) {
        touched.clear();
        for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
            const std::size_t m = a.col[k];
            for (std::size_t q = b.row_ptr[m]; q < b.row_ptr[m + 1]; ++q) {
                if (acc[b.col[q]] == cd(0.0, 0.0)) touched.push_back(b.col[q]);
                acc[b.col[q]] += a.val[k] * b.val[q];
            }
        }
        for (std::size_t c : touched) {
            trips.push_back({r, c, acc[c]});
            acc[c] = cd(0.0, 0.0);
        }
    }
    return csr_from(a.n, std::move(trips));
}

double QuantumState::norm() const { return std::sqrt(kernels::nrm2sq(amp.data(), amp.size())); }

SparseOp annihilator(const FockSpace& f, int mode) {
    std::vector<Trip> trips;
    for (std::size_t i = 0; i < f.dim(); ++i) {
        const int n = f.occ(i, mode);
        if (n >= 1)
            trips.push_back({f.index.at(shifted(f.basis[i], mode, -1)), i,
                             std::sqrt(f.eps * n)});
    }
    return csr_from(f.dim(), std::move(trips));
}

SparseOp creator(const FockSpace& f, int mode) { return annihilator(f, mode).adjoint(); }

SparseOp nucleon_number(const FockSpace& f) {
    std::vector<Trip> trips;
    for (std::size_t i = 0; i < f.dim(); ++i)
        trips.push_back({i, i, f.eps * static_cast<double>(f.nucleon_quanta(i))});
    return csr_from(f.dim(), std::move(trips));
}

SparseOp wick(const FockSpace& f, const PolySymbol& sym) {
    if (sym.nmodes() != f.modes->n_total())
        throw ConfigError("wick: symbol mode count does not match the space");
    const int nm = sym.nmodes();
    std::vector<Trip> trips;
    std::vector<int> occ(static_cast<std::size_t>(nm));
    for (std::size_t i = 0; i < f.dim(); ++i) {
        for (int m = 0; m < nm; ++m) occ[static_cast<std::size_t>(m)] = f.occ(i, m);
        for (const Mono& t : sym.terms()) {
            double amp2 = 1.0;
            std::uint64_t target = f.basis[i];
            int total = 0;
            bool ok = true;
            for (int m = 0; m < nm && ok; ++m) {
                const int nu = t.nu[static_cast<std::size_t>(m)];
                const int mu = t.mu[static_cast<std::size_t>(m)];
                const int n = occ[static_cast<std::size_t>(m)];
                if (n < nu) {
                    ok = false;
                    break;
                }
                const int after = n - nu + mu;
                if (after > f.caps[static_cast<std::size_t>(m)]) {
                    ok = false;
                    break;
                }
                for (int s = 0; s < nu; ++s) amp2 *= f.eps * (n - s);
                for (int s = 1; s <= mu; ++s) amp2 *= f.eps * (n - nu + s);
                target = shifted(target, m, mu - nu);
                total += after;
            }
            if (!ok || total > f.n_max) continue;
            trips.push_back({f.index.at(target), i, t.c * std::sqrt(amp2)});
        }
    }
    return csr_from(f.dim(), std::move(trips));
}

cvec expi_action(const SparseOp& h, double tau, const cvec& psi) {
    if (psi.size() != h.n) throw ConfigError("expi_action: dimension mismatch");
    if (tau == 0.0 || h.nnz() == 0) return psi;

    const double hn = h.inf_norm();
    if (h.n < 512) {
        Eigen::SelfAdjointEigenSolver<Mat> es(dense_of(h));
        Eigen::VectorXcd x = Eigen::Map<const Eigen::VectorXcd>(
            psi.data(), static_cast<Eigen::Index>(h.n));
        Eigen::VectorXcd phases(static_cast<Eigen::Index>(h.n));
        for (Eigen::Index r = 0; r < phases.size(); ++r)
            phases(r) = std::exp(cd(0.0, tau * es.eigenvalues()(r)));
        Eigen::VectorXcd y =
            es.eigenvectors() * phases.cwiseProduct(es.eigenvectors().adjoint() * x);
        return cvec(y.data(), y.data() + y.size());
    }

    const double tol = 1e-13 * std::sqrt(kernels::nrm2sq(psi.data(), psi.size()));
    int nsub = std::max(1, static_cast<int>(std::ceil(std::abs(tau) * hn / 12.0)));
    for (int attempt = 0; attempt < 4; ++attempt) {
        cvec cur = psi;
        bool fine = true;
        for (int s = 0; s < nsub && fine; ++s)
            fine = lanczos_substep(h, tau / nsub, cur, 150, tol);
        if (fine) return cur;
        nsub *= 2;
    }
    throw NumericError("expi_action: Lanczos failed to converge");
}

cvec apply_weyl(const FockSpace& f, const cvec& xi, const cvec& psi) {
    if (static_cast<int>(xi.size()) != f.modes->n_total())
        throw ConfigError("weyl: xi size must match the mode count");
    const double xn2 = kernels::nrm2sq(xi.data(), xi.size());
    if (f.eps * xn2 > 0.1 * f.n_max)
        throw NumericError("weyl: truncation guard eps*|xi|^2 > 0.1*N_max");
    const SparseOp s_mes = field_generator(f, xi, f.modes->n_nuc(), f.modes->n_total());
    const SparseOp s_nuc = field_generator(f, xi, 0, f.modes->n_nuc());
    return expi_action(s_nuc, 1.0, expi_action(s_mes, 1.0, psi));
}

QuantumState coherent_state(const FockSpace& f, const cvec& z0) {
    if (static_cast<int>(z0.size()) != f.modes->n_total())
        throw ConfigError("coherent_state: z0 size must match the mode count");
    const double zn2 = kernels::nrm2sq(z0.data(), z0.size());
    if (zn2 / f.eps > 0.5 * f.n_max)
        throw NumericError("coherent_state: truncation guard |z0|^2/eps > 0.5*N_max");

    // (a*(z0) - a(z0))/eps = i h with Hermitian h
    std::vector<Trip> trips;
    for (std::size_t i = 0; i < f.dim(); ++i) {
        const int total = f.total_quanta(i);
        for (int m = 0; m < f.modes->n_total(); ++m) {
            if (z0[static_cast<std::size_t>(m)] == cd(0.0, 0.0)) continue;
            const int n = f.occ(i, m);
            if (n >= 1)
                trips.push_back({f.index.at(shifted(f.basis[i], m, -1)), i,
                                 cd(0.0, 1.0) * std::conj(z0[static_cast<std::size_t>(m)]) *
                                     std::sqrt(f.eps * n) / f.eps});
            if (n < f.caps[static_cast<std::size_t>(m)] && total < f.n_max)
                trips.push_back({f.index.at(shifted(f.basis[i], m, +1)), i,
                                 cd(0.0, -1.0) * z0[static_cast<std::size_t>(m)] *
                                     std::sqrt(f.eps * (n + 1)) / f.eps});
        }
    }
    const SparseOp h = csr_from(f.dim(), std::move(trips));
    cvec vac(f.dim(), cd(0.0, 0.0));
    vac[f.index.at(0)] = 1.0;
    return QuantumState{expi_action(h, 1.0, vac)};
}

int sector_bound(double eps, double sigma0, double K) {
    if (!(eps > 0.0) || !(K > 0.0) || !std::isfinite(sigma0) || sigma0 < 0.0)
        throw ConfigError("sector_bound: need eps > 0, K > 0, finite sigma0 >= 0");
    const double x = (sigma0 - 2.0 * K) / (2.0 * K * eps) - 1.0;
    return x < 0.0 ? 0 : static_cast<int>(std::floor(x + 1e-12));
}

Hamiltonians build_hamiltonians(const FockSpace& f, const ExternalPotential& V,
                                const RenormParams& p, double K, bool coupling_on) {
    if (f.dim() > 5000) throw ConfigError("hamiltonians: basis larger than 5000 states");
    Hamiltonians hs;
    hs.frak_n = sector_bound(f.eps, p.sigma0, K);

    const PolySymbol sym = coupling_on
                               ? reduce_energy(EnergyKind::dressed, *f.modes, V, p)
                               : reduce_energy(EnergyKind::free, *f.modes, V, p);
    SparseOp h = wick(f, sym);
    // Def. 7: zero every nucleon sector above the bound
    std::vector<Trip> trips;
    for (std::size_t r = 0; r < h.n; ++r) {
        if (f.nucleon_quanta(r) > hs.frak_n) continue;
        for (std::size_t k = h.row_ptr[r]; k < h.row_ptr[r + 1]; ++k)
            if (f.nucleon_quanta(h.col[k]) <= hs.frak_n)
                trips.push_back({r, h.col[k], h.val[k]});
    }
    hs.h_hat = csr_from(h.n, std::move(trips));

    if (coupling_on) {
        hs.t_inf = wick(f, reduce_energy(EnergyKind::dressing_gen, *f.modes, V, p));
    } else {
        hs.t_inf.n = f.dim();
        hs.t_inf.row_ptr.assign(f.dim() + 1, 0);
    }
    return hs;
}

cvec h_ren_dense(const FockSpace& f, const Hamiltonians& hs) {
    const std::size_t n = hs.h_hat.n;
    if (n > 512) throw ConfigError("h_ren_dense: dense conjugation limited to dim 512");
    Eigen::SelfAdjointEigenSolver<Mat> es(dense_of(hs.t_inf));
    Eigen::VectorXcd phases(static_cast<Eigen::Index>(n));
    for (Eigen::Index r = 0; r < phases.size(); ++r)
        phases(r) = std::exp(cd(0.0, -es.eigenvalues()(r) / f.eps));
    const Mat u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    const Mat hr = u * dense_of(hs.h_hat) * u.adjoint();
    cvec out(n * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            out[r * n + c] = hr(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    return out;
}

cvec propagate(const FockSpace& f, const SparseOp& h, double t, const cvec& psi) {
    const double n_in = kernels::nrm2sq(psi.data(), psi.size());
    cvec out = expi_action(h, -t / f.eps, psi);
    const double n_out = kernels::nrm2sq(out.data(), out.size());
    if (std::abs(n_out - n_in) > 1e-10 * (1.0 + n_in))
        throw NumericError("propagate: norm drift beyond 1e-10");
    return out;
}

cvec propagate_ren(const FockSpace& f, const Hamiltonians& hs, double t, const cvec& psi) {
    if (hs.t_inf.nnz() == 0) return propagate(f, hs.h_hat, t, psi);
    cvec cur = expi_action(hs.t_inf, 1.0 / f.eps, psi);
    cur = propagate(f, hs.h_hat, t, cur);
    return expi_action(hs.t_inf, -1.0 / f.eps, cur);
}

namespace {

PolySymbol negated(const PolySymbol& s) {
    PolySymbol out(s.nmodes());
    for (Mono t : s.terms()) {
        t.c = -t.c;
        out.add(t);
    }
    out.canon();
    return out;
}

cvec flow_symbol(const PolySymbol& s, cvec z, double duration, const FlowConfig& base) {
    if (duration == 0.0) return z;
    FlowConfig fc = base;
    fc.integrator = FlowConfig::Integrator::rk4;
    fc.t_final = std::abs(duration);
    return duration > 0.0 ? galerkin_flow(s, std::move(z), fc)
                          : galerkin_flow(negated(s), std::move(z), fc);
}

}  // namespace

std::vector<CorrespondRow> correspondence_experiment(const ModeSet& ms,
                                                     const ExternalPotential& V,
                                                     const RenormParams& p,
                                                     const CorrespondenceConfig& cfg) {
    const int nt = ms.n_total();
    if (static_cast<int>(cfg.z0.size()) != nt || static_cast<int>(cfg.xi.size()) != nt)
        throw ConfigError("correspondence: z0 and xi must match the mode count");
    if (cfg.t_grid.empty() || cfg.eps_list.empty())
        throw ConfigError("correspondence: empty t or eps grid");
    for (double t : cfg.t_grid)
        if (!(t >= 0.0)) throw ConfigError("correspondence: times must be nonnegative");
    for (double e : cfg.eps_list)
        if (!(e > 0.0)) throw ConfigError("correspondence: eps must be positive");
    if (cfg.n_max < 1) throw ConfigError("correspondence: total cap must be at least 1");

    // classical side, shared across eps
    const PolySymbol sym_h = cfg.coupling_on ? reduce_energy(EnergyKind::dressed, ms, V, p)
                                             : reduce_energy(EnergyKind::free, ms, V, p);
    PolySymbol sym_t(nt);
    if (cfg.coupling_on) sym_t = reduce_energy(EnergyKind::dressing_gen, ms, V, p);

    std::vector<cvec> zt(cfg.t_grid.size());
    const cvec w0 = cfg.coupling_on ? flow_symbol(sym_t, cfg.z0, -1.0, cfg.classical) : cfg.z0;
    for (std::size_t it = 0; it < cfg.t_grid.size(); ++it) {
        cvec w = flow_symbol(sym_h, w0, cfg.t_grid[it], cfg.classical);
        zt[it] = cfg.coupling_on ? flow_symbol(sym_t, std::move(w), 1.0, cfg.classical)
                                 : std::move(w);
    }

    std::vector<CorrespondRow> rows;
    rows.reserve(cfg.eps_list.size() * cfg.t_grid.size());
    for (double eps : cfg.eps_list) {
        const FockSpace f = FockSpace::build(
            ms, std::vector<int>(static_cast<std::size_t>(nt), cfg.n_max), cfg.n_max, eps);
        const Hamiltonians hs = build_hamiltonians(f, V, p, cfg.K, cfg.coupling_on);
        const QuantumState psi0 = coherent_state(f, cfg.z0);
        for (std::size_t it = 0; it < cfg.t_grid.size(); ++it) {
            CorrespondRow row;
            row.eps = eps;
            row.t = cfg.t_grid[it];
            row.basis_dim = f.dim();
            const cvec psit = propagate_ren(f, hs, row.t, psi0.amp);
            for (std::size_t i = 0; i < f.dim(); ++i)
                if (f.at_boundary(i)) row.cap_violation += std::norm(psit[i]);
            row.Q = kernels::dot(psit.data(), apply_weyl(f, cfg.xi, psit).data(), f.dim());
            const cd xz = kernels::dot(cfg.xi.data(), zt[it].data(), cfg.xi.size());
            row.C = std::exp(cd(0.0, std::sqrt(2.0) * xz.real()));
            row.err = std::abs(row.Q - row.C);
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace skg
