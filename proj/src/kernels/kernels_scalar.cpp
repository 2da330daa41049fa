#include "ouqm/kernels.hpp"

namespace ouqm::kernels {
namespace {

double dot_r(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

cplx dotc(const cplx* x, const cplx* y, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    }
    return {re, im};
}

double nrm2sq(const cplx* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return s;
}

void axpy_c(cplx a, const cplx* x, cplx* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_c(cplx a, cplx* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] *= a;
}

void diag_mul_acc(const double* d, const cplx* x, cplx* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += d[i] * x[i];
}

void stencil_acc_c(double s, const cplx* x, cplx* y, std::size_t n) {
    if (n == 0) return;
    if (n == 1) return; // both neighbours are ghosts
    y[0] += s * x[1];
    for (std::size_t i = 1; i + 1 < n; ++i) y[i] += s * (x[i + 1] - x[i - 1]);
    y[n - 1] += -s * x[n - 2];
}

void stencil_acc_r(double s, const double* x, double* y, std::size_t n) {
    if (n <= 1) return;
    y[0] += s * x[1];
    for (std::size_t i = 1; i + 1 < n; ++i) y[i] += s * (x[i + 1] - x[i - 1]);
    y[n - 1] += -s * x[n - 2];
}

void horner3(const double* c, std::size_t nc, const double* c1, std::size_t nc1,
             const double* c2, std::size_t nc2, const double* x, std::size_t n,
             double* v, double* d1, double* d2) {
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x[i];
        if (v) {
            double a = c[nc - 1];
            for (std::size_t k = nc - 1; k-- > 0;) a = a * xi + c[k];
            v[i] = a;
        }
        if (d1) {
            double a = c1[nc1 - 1];
            for (std::size_t k = nc1 - 1; k-- > 0;) a = a * xi + c1[k];
            d1[i] = a;
        }
        if (d2) {
            double a = c2[nc2 - 1];
            for (std::size_t k = nc2 - 1; k-- > 0;) a = a * xi + c2[k];
            d2[i] = a;
        }
    }
}

void recur_step(double a, double b, const double* q, const double* h1, const double* h0,
                double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a * q[i] * h1[i] + b * h0[i];
}

} // namespace

const KernelTable& scalar_table() {
    static const KernelTable t{"scalar", dot_r,         dotc,          nrm2sq,
                               axpy_c,   scale_c,       diag_mul_acc,  stencil_acc_c,
                               stencil_acc_r, horner3, recur_step};
    return t;
}

} // namespace ouqm::kernels
