// AVX2 variants of the kernel table. Compiled with -mavx2 -mfma; the
// dispatcher only hands control here after a cpuid check.

#include "skg/kernels.hpp"

#include <immintrin.h>

namespace skg::kernels {
namespace {

// One __m256d holds two complex<double> values [re0, im0, re1, im1].

inline __m256d cmul_pd(__m256d a, __m256d b) {
    __m256d are = _mm256_movedup_pd(a);
    __m256d aim = _mm256_permute_pd(a, 0xF);
    __m256d bsw = _mm256_permute_pd(b, 0x5);
    return _mm256_fmaddsub_pd(are, b, _mm256_mul_pd(aim, bsw));
}

// conj(a) * b
inline __m256d conj_mul_pd(__m256d a, __m256d b) {
    __m256d are = _mm256_movedup_pd(a);
    __m256d aim = _mm256_permute_pd(a, 0xF);
    __m256d bsw = _mm256_permute_pd(b, 0x5);
    return _mm256_fmsubadd_pd(are, b, _mm256_mul_pd(aim, bsw));
}

void cmul_avx2(cd* dst, const cd* a, const cd* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d av = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
        __m256d bv = _mm256_loadu_pd(reinterpret_cast<const double*>(b + i));
        _mm256_storeu_pd(reinterpret_cast<double*>(dst + i), cmul_pd(av, bv));
    }
    for (; i < n; ++i) dst[i] = a[i] * b[i];
}

void axpy_avx2(cd* dst, cd s, const cd* x, std::size_t n) {
    __m256d sre = _mm256_set1_pd(s.real());
    __m256d sim = _mm256_set1_pd(s.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
        __m256d xsw = _mm256_permute_pd(xv, 0x5);
        __m256d prod = _mm256_fmaddsub_pd(sre, xv, _mm256_mul_pd(sim, xsw));
        __m256d dv = _mm256_loadu_pd(reinterpret_cast<double*>(dst + i));
        _mm256_storeu_pd(reinterpret_cast<double*>(dst + i), _mm256_add_pd(dv, prod));
    }
    for (; i < n; ++i) dst[i] += s * x[i];
}

void scale_avx2(cd* dst, cd s, std::size_t n) {
    __m256d sre = _mm256_set1_pd(s.real());
    __m256d sim = _mm256_set1_pd(s.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d dv = _mm256_loadu_pd(reinterpret_cast<double*>(dst + i));
        __m256d dsw = _mm256_permute_pd(dv, 0x5);
        _mm256_storeu_pd(reinterpret_cast<double*>(dst + i),
                         _mm256_fmaddsub_pd(sre, dv, _mm256_mul_pd(sim, dsw)));
    }
    for (; i < n; ++i) dst[i] *= s;
}

void rmul_avx2(cd* dst, const double* r, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d rv = _mm256_setr_pd(r[i], r[i], r[i + 1], r[i + 1]);
        __m256d dv = _mm256_loadu_pd(reinterpret_cast<double*>(dst + i));
        _mm256_storeu_pd(reinterpret_cast<double*>(dst + i), _mm256_mul_pd(dv, rv));
    }
    for (; i < n; ++i) dst[i] *= r[i];
}

cd dot_avx2(const cd* a, const cd* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d av = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
        __m256d bv = _mm256_loadu_pd(reinterpret_cast<const double*>(b + i));
        acc = _mm256_add_pd(acc, conj_mul_pd(av, bv));
    }
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    cd s(lane[0] + lane[2], lane[1] + lane[3]);
    for (; i < n; ++i) {
        s += cd(a[i].real() * b[i].real() + a[i].imag() * b[i].imag(),
                a[i].real() * b[i].imag() - a[i].imag() * b[i].real());
    }
    return s;
}

double nrm2sq_avx2(const cd* a, std::size_t n) {
    const double* p = reinterpret_cast<const double*>(a);
    std::size_t m = 2 * n;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
        __m256d v = _mm256_loadu_pd(p + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    double s = lane[0] + lane[1] + lane[2] + lane[3];
    for (; i < m; ++i) s += p[i] * p[i];
    return s;
}

double wnrm2sq_avx2(const double* w, const cd* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d av = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
        __m256d wv = _mm256_setr_pd(w[i], w[i], w[i + 1], w[i + 1]);
        acc = _mm256_fmadd_pd(_mm256_mul_pd(av, av), wv, acc);
    }
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    double s = lane[0] + lane[1] + lane[2] + lane[3];
    for (; i < n; ++i) s += w[i] * (a[i].real() * a[i].real() + a[i].imag() * a[i].imag());
    return s;
}

}  // namespace

namespace detail {
const Table* avx2_table() {
    if (!__builtin_cpu_supports("avx2") || !__builtin_cpu_supports("fma")) return nullptr;
    static const Table t{cmul_avx2, axpy_avx2, scale_avx2, rmul_avx2,
                         dot_avx2,  nrm2sq_avx2, wnrm2sq_avx2};
    return &t;
}
}  // namespace detail

}  // namespace skg::kernels
