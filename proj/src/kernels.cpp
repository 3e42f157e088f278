#include "skg/kernels.hpp"

#include <cmath>
#include <cstdlib>

namespace skg::kernels {

namespace {

void cmul_scalar(cd* dst, const cd* a, const cd* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] * b[i];
}

void axpy_scalar(cd* dst, cd s, const cd* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] += s * x[i];
}

void scale_scalar(cd* dst, cd s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] *= s;
}

void rmul_scalar(cd* dst, const double* r, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] *= r[i];
}

cd dot_scalar(const cd* a, const cd* b, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

double nrm2sq_scalar(const cd* a, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::norm(a[i]);
    return s;
}

double wnrm2sq_scalar(const double* w, const cd* a, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * std::norm(a[i]);
    return s;
}

const detail::Table& active_table() {
    static const detail::Table* table = [] {
        const char* off = std::getenv("SKG_NO_SIMD");
        if (off == nullptr || off[0] == '\0' || off[0] == '0') {
            if (const detail::Table* t = detail::avx2_table()) return t;
        }
        return &detail::scalar_table();
    }();
    return *table;
}

}  // namespace

namespace detail {
const Table& scalar_table() {
    static const Table t{cmul_scalar, axpy_scalar, scale_scalar, rmul_scalar,
                         dot_scalar,  nrm2sq_scalar, wnrm2sq_scalar};
    return t;
}
}  // namespace detail

bool simd_active() { return &active_table() != &detail::scalar_table(); }

const char* backend_name() { return simd_active() ? "avx2" : "scalar"; }

void cmul(cd* dst, const cd* a, const cd* b, std::size_t n) { active_table().cmul(dst, a, b, n); }
void axpy(cd* dst, cd s, const cd* x, std::size_t n) { active_table().axpy(dst, s, x, n); }
void scale(cd* dst, cd s, std::size_t n) { active_table().scale(dst, s, n); }
void rmul(cd* dst, const double* r, std::size_t n) { active_table().rmul(dst, r, n); }
cd dot(const cd* a, const cd* b, std::size_t n) { return active_table().dot(a, b, n); }
double nrm2sq(const cd* a, std::size_t n) { return active_table().nrm2sq(a, n); }
double wnrm2sq(const double* w, const cd* a, std::size_t n) { return active_table().wnrm2sq(w, a, n); }

void expi_mul(cd* dst, const double* phase, const cd* a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        dst[i] = cd(std::cos(phase[i]), std::sin(phase[i])) * a[i];
    }
}

#ifndef SKG_HAVE_AVX2
namespace detail {
const Table* avx2_table() { return nullptr; }
}  // namespace detail
#endif

}  // namespace skg::kernels
