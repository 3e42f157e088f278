#ifndef SKG_KERNELS_HPP
#define SKG_KERNELS_HPP

#include <complex>
#include <cstddef>

// Data-parallel primitives used by the field and flow hot loops.
// A scalar reference implementation always exists; on x86-64 an AVX2
// variant is selected at runtime (override with SKG_NO_SIMD=1).

namespace skg::kernels {

using cd = std::complex<double>;

bool simd_active();
const char* backend_name();

// dst[i] = a[i] * b[i]
void cmul(cd* dst, const cd* a, const cd* b, std::size_t n);
// dst[i] += s * x[i]
void axpy(cd* dst, cd s, const cd* x, std::size_t n);
// dst[i] *= s
void scale(cd* dst, cd s, std::size_t n);
// dst[i] *= r[i]
void rmul(cd* dst, const double* r, std::size_t n);
// sum over i of conj(a[i]) * b[i]
cd dot(const cd* a, const cd* b, std::size_t n);
// sum over i of |a[i]|^2
double nrm2sq(const cd* a, std::size_t n);
// sum over i of w[i] * |a[i]|^2
double wnrm2sq(const double* w, const cd* a, std::size_t n);

// dst[i] = exp(i*phase[i]) * a[i]; sincos stays scalar, not dispatched
void expi_mul(cd* dst, const double* phase, const cd* a, std::size_t n);

namespace detail {
struct Table {
    void (*cmul)(cd*, const cd*, const cd*, std::size_t);
    void (*axpy)(cd*, cd, const cd*, std::size_t);
    void (*scale)(cd*, cd, std::size_t);
    void (*rmul)(cd*, const double*, std::size_t);
    cd (*dot)(const cd*, const cd*, std::size_t);
    double (*nrm2sq)(const cd*, std::size_t);
    double (*wnrm2sq)(const double*, const cd*, std::size_t);
};
const Table& scalar_table();
const Table* avx2_table();  // nullptr when unavailable
}  // namespace detail

}  // namespace skg::kernels

#endif
