#ifndef SKG_GRID_HPP
#define SKG_GRID_HPP

#include <cstdint>
#include <memory>

#include "skg/common.hpp"

namespace skg {

enum class Space : std::uint8_t { position, wavenumber };

// A sampled field together with the space it currently lives in, so the
// transform direction is checked instead of assumed.
struct Field {
    cvec v;
    Space space = Space::position;
};

struct Dispersion {
    double m0 = 1.0;
    double omega_ksq(double ksq) const;  // sqrt(k^2 + m0^2)
    double omega(double k) const { return omega_ksq(k * k); }
};

// Periodic box [-L, L)^d sampled at n points per axis (n a power of two).
// Position nodes x_j = -L + j*(2L/n); wavenumber nodes k_m = pi*m/L with
// m in [-n/2, n/2), stored in FFT order.
class Grid {
public:
    Grid(int d, int n, double L);
    ~Grid();
    Grid(const Grid&) = delete;
    Grid& operator=(const Grid&) = delete;

    int d() const { return d_; }
    int n() const { return n_; }
    double L() const { return L_; }
    std::size_t size() const { return size_; }
    double hx() const { return hx_; }  // position cell volume (2L/n)^d
    double hk() const { return hk_; }  // wavenumber cell volume (pi/L)^d

    double x1(int j) const { return -L_ + j * (2.0 * L_ / n_); }
    double k1(int m) const;  // FFT-ordered raw index -> wavenumber

    const dvec& ksq() const { return ksq_; }
    const dvec& kcomp(int axis) const { return kcomp_[axis]; }
    const dvec& xcomp(int axis) const { return xcomp_[axis]; }
    // (-1)^{m_1+...+m_d}: relates the centered-box transform to the raw DFT
    const dvec& ft_sign() const { return sign_; }
    // flattened index of the -k node
    std::size_t conj_index(std::size_t idx) const { return conj_[idx]; }

    // raw unnormalized DFT, sign = -1 forward / +1 backward
    void dft(const cd* in, cd* out, int sign) const;

private:
    int d_, n_;
    double L_, hx_, hk_;
    std::size_t size_;
    dvec ksq_, sign_;
    std::vector<dvec> kcomp_, xcomp_;
    std::vector<std::size_t> conj_;
    struct Plans;
    std::unique_ptr<Plans> plans_;
};

// Unitary pair: F(f)(k) = (2pi)^{-d/2} Int f(x) e^{-ikx} dx and its inverse;
// composing the two is the identity on the grid.
Field unitary_ft(const Grid& g, const Field& f);
Field unitary_ift(const Grid& g, const Field& f);
cvec to_k(const Grid& g, const cvec& fx);
cvec to_x(const Grid& g, const cvec& fk);

// Plain convention, no prefactor: F(rho)(k) = Int e^{-ikx} rho(x) dx,
// with rho = |u|^2.
cvec plain_ft_density(const Grid& g, const cvec& u);
cvec plain_ft(const Grid& g, const dvec& rho);

// h_k * sum_k phi(k) e^{+ikx} on the position grid
cvec sum_over_k(const Grid& g, const cvec& phi);

// spectral derivative D = -i d/dx along one axis
cvec spectral_derivative(const Grid& g, const cvec& u, int axis);

// weighted inner products <a,b> = h * sum conj(a) b
cd inner_x(const Grid& g, const cvec& a, const cvec& b);
cd inner_k(const Grid& g, const cvec& a, const cvec& b);
double norm_x_sq(const Grid& g, const cvec& a);
double norm_k_sq(const Grid& g, const cvec& a);

// eq. 71 maps between the meson mode function alpha and the real pair (A, Adot)
struct RealFields {
    dvec A, Adot;
};
RealFields state_to_real_fields(const Grid& g, const cvec& alpha, const Dispersion& disp);
cvec real_fields_to_alpha(const Grid& g, const RealFields& f, const Dispersion& disp);

}  // namespace skg

#endif
