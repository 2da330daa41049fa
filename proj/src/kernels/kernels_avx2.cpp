// AVX2 kernel table. This translation unit is the only one compiled with
// -mavx2; the dispatcher checks cpu support before handing out the table.

#include "ouqm/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define OUQM_HAVE_AVX2_TU 1
#include <immintrin.h>
#else
#define OUQM_HAVE_AVX2_TU 0
#endif

namespace ouqm::kernels {

#if OUQM_HAVE_AVX2_TU

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot_r(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

cplx dotc(const cplx* x, const cplx* y, std::size_t n) {
    const double* xd = reinterpret_cast<const double*>(x);
    const double* yd = reinterpret_cast<const double*>(y);
    // lanes: [re0 im0 re1 im1]
    const __m256d imsign = _mm256_setr_pd(-1.0, 1.0, -1.0, 1.0);
    __m256d accr = _mm256_setzero_pd();
    __m256d acci = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d a = _mm256_loadu_pd(xd + 2 * i);
        __m256d b = _mm256_loadu_pd(yd + 2 * i);
        accr = _mm256_fmadd_pd(a, b, accr); // ar*br, ai*bi pairs
        __m256d asw = _mm256_permute_pd(a, 0x5); // [im0 re0 im1 re1]
        acci = _mm256_fmadd_pd(_mm256_mul_pd(asw, imsign), b, acci); // -ai*br, ar*bi
    }
    double re = hsum(accr), im = hsum(acci);
    for (; i < n; ++i) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    }
    return {re, im};
}

double nrm2sq(const cplx* x, std::size_t n) {
    const double* xd = reinterpret_cast<const double*>(x);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d a = _mm256_loadu_pd(xd + 2 * i);
        acc = _mm256_fmadd_pd(a, a, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += std::norm(x[i]);
    return s;
}

void axpy_c(cplx a, const cplx* x, cplx* y, std::size_t n) {
    const double* xd = reinterpret_cast<const double*>(x);
    double* yd = reinterpret_cast<double*>(y);
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_setr_pd(-a.imag(), a.imag(), -a.imag(), a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        yv = _mm256_fmadd_pd(ar, xv, yv);
        yv = _mm256_fmadd_pd(ai, _mm256_permute_pd(xv, 0x5), yv);
        _mm256_storeu_pd(yd + 2 * i, yv);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale_c(cplx a, cplx* y, std::size_t n) {
    double* yd = reinterpret_cast<double*>(y);
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_setr_pd(-a.imag(), a.imag(), -a.imag(), a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        __m256d out = _mm256_mul_pd(ar, yv);
        out = _mm256_fmadd_pd(ai, _mm256_permute_pd(yv, 0x5), out);
        _mm256_storeu_pd(yd + 2 * i, out);
    }
    for (; i < n; ++i) y[i] *= a;
}

void diag_mul_acc(const double* d, const cplx* x, cplx* y, std::size_t n) {
    const double* xd = reinterpret_cast<const double*>(x);
    double* yd = reinterpret_cast<double*>(y);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d dv = _mm256_setr_pd(d[i], d[i], d[i + 1], d[i + 1]);
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        _mm256_storeu_pd(yd + 2 * i, _mm256_fmadd_pd(dv, xv, yv));
    }
    for (; i < n; ++i) y[i] += d[i] * x[i];
}

void stencil_acc_c(double s, const cplx* x, cplx* y, std::size_t n) {
    if (n <= 1) return;
    const double* xd = reinterpret_cast<const double*>(x);
    double* yd = reinterpret_cast<double*>(y);
    const __m256d sv = _mm256_set1_pd(s);
    y[0] += s * x[1];
    std::size_t i = 1;
    for (; i + 3 <= n; i += 2) { // handles interior pairs [i, i+1], needs x[i+2]
        __m256d xp = _mm256_loadu_pd(xd + 2 * (i + 1));
        __m256d xm = _mm256_loadu_pd(xd + 2 * (i - 1));
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        _mm256_storeu_pd(yd + 2 * i, _mm256_fmadd_pd(sv, _mm256_sub_pd(xp, xm), yv));
    }
    for (; i + 1 < n; ++i) y[i] += s * (x[i + 1] - x[i - 1]);
    y[n - 1] += -s * x[n - 2];
}

void stencil_acc_r(double s, const double* x, double* y, std::size_t n) {
    if (n <= 1) return;
    const __m256d sv = _mm256_set1_pd(s);
    y[0] += s * x[1];
    std::size_t i = 1;
    for (; i + 5 <= n; i += 4) {
        __m256d xp = _mm256_loadu_pd(x + i + 1);
        __m256d xm = _mm256_loadu_pd(x + i - 1);
        __m256d yv = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(sv, _mm256_sub_pd(xp, xm), yv));
    }
    for (; i + 1 < n; ++i) y[i] += s * (x[i + 1] - x[i - 1]);
    y[n - 1] += -s * x[n - 2];
}

void horner3(const double* c, std::size_t nc, const double* c1, std::size_t nc1,
             const double* c2, std::size_t nc2, const double* x, std::size_t n,
             double* v, double* d1, double* d2) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xv = _mm256_loadu_pd(x + i);
        if (v) {
            __m256d a = _mm256_set1_pd(c[nc - 1]);
            for (std::size_t k = nc - 1; k-- > 0;)
                a = _mm256_fmadd_pd(a, xv, _mm256_set1_pd(c[k]));
            _mm256_storeu_pd(v + i, a);
        }
        if (d1) {
            __m256d a = _mm256_set1_pd(c1[nc1 - 1]);
            for (std::size_t k = nc1 - 1; k-- > 0;)
                a = _mm256_fmadd_pd(a, xv, _mm256_set1_pd(c1[k]));
            _mm256_storeu_pd(d1 + i, a);
        }
        if (d2) {
            __m256d a = _mm256_set1_pd(c2[nc2 - 1]);
            for (std::size_t k = nc2 - 1; k-- > 0;)
                a = _mm256_fmadd_pd(a, xv, _mm256_set1_pd(c2[k]));
            _mm256_storeu_pd(d2 + i, a);
        }
    }
    if (i < n)
        scalar_table().horner3(c, nc, c1, nc1, c2, nc2, x + i, n - i,
                               v ? v + i : nullptr, d1 ? d1 + i : nullptr,
                               d2 ? d2 + i : nullptr);
}

void recur_step(double a, double b, const double* q, const double* h1, const double* h0,
                double* out, std::size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    const __m256d bv = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d t = _mm256_mul_pd(av, _mm256_loadu_pd(q + i));
        t = _mm256_mul_pd(t, _mm256_loadu_pd(h1 + i));
        t = _mm256_fmadd_pd(bv, _mm256_loadu_pd(h0 + i), t);
        _mm256_storeu_pd(out + i, t);
    }
    for (; i < n; ++i) out[i] = a * q[i] * h1[i] + b * h0[i];
}

} // namespace

const KernelTable* avx2_table_if_built() {
    static const KernelTable t{"avx2",  dot_r,         dotc,         nrm2sq,
                               axpy_c,  scale_c,       diag_mul_acc, stencil_acc_c,
                               stencil_acc_r, horner3, recur_step};
    return &t;
}

#else

const KernelTable* avx2_table_if_built() { return nullptr; }

#endif

} // namespace ouqm::kernels
