#pragma once

// Thin RAII-friendly wrappers around the LAPACK drivers used here. Dense
// column-major storage throughout; failures surface as NumericalError with
// the driver name and info code.

#include <complex>
#include <vector>

#include "ouqm/errors.hpp"
#include "ouqm/types.hpp"

namespace ouqm::linalg {

struct DenseReal {
    int n = 0;
    std::vector<double> a; // column-major n*n

    explicit DenseReal(int dim = 0) : n(dim), a(static_cast<std::size_t>(dim) * std::size_t(dim), 0.0) {}
    double& at(int r, int c) { return a[std::size_t(r) + std::size_t(c) * std::size_t(n)]; }
    double at(int r, int c) const { return a[std::size_t(r) + std::size_t(c) * std::size_t(n)]; }
};

struct DenseComplex {
    int n = 0;
    std::vector<cplx> a;

    explicit DenseComplex(int dim = 0) : n(dim), a(static_cast<std::size_t>(dim) * std::size_t(dim)) {}
    cplx& at(int r, int c) { return a[std::size_t(r) + std::size_t(c) * std::size_t(n)]; }
    cplx at(int r, int c) const { return a[std::size_t(r) + std::size_t(c) * std::size_t(n)]; }
};

double norm_inf(const DenseReal& m);
double norm_inf(const DenseComplex& m);

// Full symmetric eigendecomposition (divide and conquer). On return the
// matrix columns hold the eigenvectors; eigenvalues come back ascending.
std::vector<double> sym_eig_inplace(DenseReal& m);

// Hermitian counterpart (used for cross-checks).
std::vector<double> herm_eig_inplace(DenseComplex& m);

// LU factorization of a complex matrix, reusable for many solves.
class LuComplex {
public:
    explicit LuComplex(DenseComplex m);
    void solve_inplace(std::vector<cplx>& b) const;

private:
    DenseComplex lu_;
    std::vector<int> ipiv_;
};

// Expert-driver solve (equilibration + iterative refinement). Returns the
// solution; rcond_out receives the reciprocal condition estimate of the
// (equilibrated) matrix.
std::vector<double> solve_refined(const DenseReal& m, const std::vector<double>& rhs,
                                  double* rcond_out = nullptr);

} // namespace ouqm::linalg
