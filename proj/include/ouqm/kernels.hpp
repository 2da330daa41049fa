#pragma once

// Data-parallel inner loops used by the numerics: inner products, complex
// axpy, the antisymmetric first-difference stencil, batched Horner
// evaluation and the normalized-oscillator recurrence step.
//
// Every kernel has a scalar reference implementation and (on x86-64) an AVX2
// variant. One implementation table is selected at process start; the scalar
// table is always available so the two can be equivalence-tested against
// each other.

#include <complex>
#include <cstddef>
#include <vector>

namespace ouqm::kernels {

using cplx = std::complex<double>;

struct KernelTable {
    const char* name;

    // sum_i x[i]*y[i]
    double (*dot_r)(const double* x, const double* y, std::size_t n);
    // sum_i conj(x[i])*y[i]
    cplx (*dotc)(const cplx* x, const cplx* y, std::size_t n);
    // sum_i |x[i]|^2
    double (*nrm2sq)(const cplx* x, std::size_t n);
    // y[i] += a*x[i]
    void (*axpy_c)(cplx a, const cplx* x, cplx* y, std::size_t n);
    // y[i] *= a
    void (*scale_c)(cplx a, cplx* y, std::size_t n);
    // y[i] += d[i]*x[i]  (real diagonal times complex field)
    void (*diag_mul_acc)(const double* d, const cplx* x, cplx* y, std::size_t n);
    // y[i] += s*(x[i+1] - x[i-1]) with Dirichlet ghosts x[-1] = x[n] = 0
    void (*stencil_acc_c)(double s, const cplx* x, cplx* y, std::size_t n);
    void (*stencil_acc_r)(double s, const double* x, double* y, std::size_t n);
    // Horner evaluation of value/first/second derivative coefficient sets
    // over a batch of points. Any of v, d1, d2 may be null.
    void (*horner3)(const double* c, std::size_t nc, const double* c1, std::size_t nc1,
                    const double* c2, std::size_t nc2, const double* x, std::size_t n,
                    double* v, double* d1, double* d2);
    // out[i] = a*q[i]*h1[i] + b*h0[i]  (three-term recurrence step)
    void (*recur_step)(double a, double b, const double* q, const double* h1,
                       const double* h0, double* out, std::size_t n);
};

// Table picked for this process (AVX2 when compiled in and supported,
// otherwise scalar). Selection is deterministic on a given machine; the
// OUQM_FORCE_SCALAR environment variable pins the scalar table.
const KernelTable& active();

const KernelTable& scalar_table();

// All tables usable on this machine (for equivalence tests).
std::vector<const KernelTable*> available_tables();

} // namespace ouqm::kernels
