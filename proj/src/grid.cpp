#include "skg/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "skg/kernels.hpp"

namespace skg {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

double Dispersion::omega_ksq(double ksq) const { return std::sqrt(ksq + m0 * m0); }

struct Grid::Plans {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    ~Plans() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
    }
};

Grid::Grid(int d, int n, double L) : d_(d), n_(n), L_(L) {
    if (d < 1 || d > 3) throw ConfigError("grid: d must be 1, 2 or 3");
    if (n < 2 || (n & (n - 1)) != 0) throw ConfigError("grid: n must be a power of two >= 2");
    if (!(L > 0.0)) throw ConfigError("grid: L must be positive");

    size_ = 1;
    for (int a = 0; a < d; ++a) size_ *= static_cast<std::size_t>(n);
    hx_ = std::pow(2.0 * L / n, d);
    hk_ = std::pow(pi / L, d);

    ksq_.assign(size_, 0.0);
    sign_.assign(size_, 1.0);
    conj_.assign(size_, 0);
    kcomp_.assign(d, dvec(size_, 0.0));
    xcomp_.assign(d, dvec(size_, 0.0));

    for (std::size_t idx = 0; idx < size_; ++idx) {
        std::size_t rem = idx;
        std::size_t cidx = 0;
        std::size_t stride = size_;
        int msum = 0;
        for (int a = 0; a < d; ++a) {
            stride /= static_cast<std::size_t>(n);
            int r = static_cast<int>(rem / stride);
            rem %= stride;
            int m = r < n / 2 ? r : r - n;  // signed frequency
            msum += r;
            kcomp_[a][idx] = pi * m / L;
            xcomp_[a][idx] = x1(r);
            ksq_[idx] += kcomp_[a][idx] * kcomp_[a][idx];
            cidx += static_cast<std::size_t>((n - r) % n) * stride;
        }
        sign_[idx] = (msum % 2 == 0) ? 1.0 : -1.0;
        conj_[idx] = cidx;
    }

    plans_ = std::make_unique<Plans>();
    cvec buf(size_);
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    int dims[3] = {n, n, n};
    std::lock_guard<std::mutex> lock(planner_mutex());
    plans_->fwd = fftw_plan_dft(d, dims, p, p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_->bwd = fftw_plan_dft(d, dims, p, p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plans_->fwd || !plans_->bwd) throw NumericError("grid: fftw planning failed");
}

Grid::~Grid() = default;

double Grid::k1(int m) const {
    int s = m < n_ / 2 ? m : m - n_;
    return pi * s / L_;
}

void Grid::dft(const cd* in, cd* out, int sign) const {
    auto* i = reinterpret_cast<fftw_complex*>(const_cast<cd*>(in));
    auto* o = reinterpret_cast<fftw_complex*>(out);
    fftw_execute_dft(sign < 0 ? plans_->fwd : plans_->bwd, i, o);
}

cvec to_k(const Grid& g, const cvec& fx) {
    cvec out(g.size());
    g.dft(fx.data(), out.data(), -1);
    const double c = std::pow(2.0 * pi, -0.5 * g.d()) * g.hx();
    kernels::rmul(out.data(), g.ft_sign().data(), out.size());
    kernels::scale(out.data(), cd(c, 0.0), out.size());
    return out;
}

cvec to_x(const Grid& g, const cvec& fk) {
    cvec tmp(fk);
    kernels::rmul(tmp.data(), g.ft_sign().data(), tmp.size());
    cvec out(g.size());
    g.dft(tmp.data(), out.data(), +1);
    const double c = std::pow(2.0 * pi, -0.5 * g.d()) * g.hk();
    kernels::scale(out.data(), cd(c, 0.0), out.size());
    return out;
}

Field unitary_ft(const Grid& g, const Field& f) {
    if (f.space != Space::position) throw ConfigError("unitary_ft: field not in position space");
    return Field{to_k(g, f.v), Space::wavenumber};
}

Field unitary_ift(const Grid& g, const Field& f) {
    if (f.space != Space::wavenumber)
        throw ConfigError("unitary_ift: field not in wavenumber space");
    return Field{to_x(g, f.v), Space::position};
}

cvec plain_ft_density(const Grid& g, const cvec& u) {
    cvec rho(g.size());
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = std::norm(u[i]);
    cvec out(g.size());
    g.dft(rho.data(), out.data(), -1);
    kernels::rmul(out.data(), g.ft_sign().data(), out.size());
    kernels::scale(out.data(), cd(g.hx(), 0.0), out.size());
    return out;
}

cvec plain_ft(const Grid& g, const dvec& rho) {
    cvec tmp(g.size());
    for (std::size_t i = 0; i < tmp.size(); ++i) tmp[i] = rho[i];
    cvec out(g.size());
    g.dft(tmp.data(), out.data(), -1);
    kernels::rmul(out.data(), g.ft_sign().data(), out.size());
    kernels::scale(out.data(), cd(g.hx(), 0.0), out.size());
    return out;
}

cvec sum_over_k(const Grid& g, const cvec& phi) {
    cvec tmp(phi);
    kernels::rmul(tmp.data(), g.ft_sign().data(), tmp.size());
    cvec out(g.size());
    g.dft(tmp.data(), out.data(), +1);
    kernels::scale(out.data(), cd(g.hk(), 0.0), out.size());
    return out;
}

cvec spectral_derivative(const Grid& g, const cvec& u, int axis) {
    cvec uk = to_k(g, u);
    kernels::rmul(uk.data(), g.kcomp(axis).data(), uk.size());
    return to_x(g, uk);
}

cd inner_x(const Grid& g, const cvec& a, const cvec& b) {
    return g.hx() * kernels::dot(a.data(), b.data(), a.size());
}

cd inner_k(const Grid& g, const cvec& a, const cvec& b) {
    return g.hk() * kernels::dot(a.data(), b.data(), a.size());
}

double norm_x_sq(const Grid& g, const cvec& a) {
    return g.hx() * kernels::nrm2sq(a.data(), a.size());
}

double norm_k_sq(const Grid& g, const cvec& a) {
    return g.hk() * kernels::nrm2sq(a.data(), a.size());
}

RealFields state_to_real_fields(const Grid& g, const cvec& alpha, const Dispersion& disp) {
    const std::size_t N = g.size();
    cvec ahat(N), dhat(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double w = disp.omega_ksq(g.ksq()[i]);
        const cd ac = std::conj(alpha[g.conj_index(i)]);
        ahat[i] = (alpha[i] + ac) / std::sqrt(2.0 * w);
        dhat[i] = cd(0.0, -1.0) * std::sqrt(0.5 * w) * (alpha[i] - ac);
    }
    cvec A = to_x(g, ahat), Ad = to_x(g, dhat);
    RealFields out;
    out.A.resize(N);
    out.Adot.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        out.A[i] = A[i].real();
        out.Adot[i] = Ad[i].real();
    }
    return out;
}

cvec real_fields_to_alpha(const Grid& g, const RealFields& f, const Dispersion& disp) {
    const std::size_t N = g.size();
    cvec Ax(N), Dx(N);
    for (std::size_t i = 0; i < N; ++i) {
        Ax[i] = f.A[i];
        Dx[i] = f.Adot[i];
    }
    cvec ahat = to_k(g, Ax), dhat = to_k(g, Dx);
    cvec alpha(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double w = disp.omega_ksq(g.ksq()[i]);
        alpha[i] = std::sqrt(0.5 * w) * ahat[i] + cd(0.0, 1.0) / std::sqrt(2.0 * w) * dhat[i];
    }
    return alpha;
}

}  // namespace skg
