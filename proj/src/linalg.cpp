#include "ouqm/linalg.hpp"

#include <cmath>
#include <string>

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

namespace ouqm::linalg {

namespace {
[[noreturn]] void fail(const char* driver, int info, int n) {
    throw NumericalError(std::string(driver) + " failed: info=" + std::to_string(info) +
                         ", dimension=" + std::to_string(n));
}
} // namespace

double norm_inf(const DenseReal& m) {
    double best = 0.0;
    for (int r = 0; r < m.n; ++r) {
        double s = 0.0;
        for (int c = 0; c < m.n; ++c) s += std::abs(m.at(r, c));
        best = std::max(best, s);
    }
    return best;
}

double norm_inf(const DenseComplex& m) {
    double best = 0.0;
    for (int r = 0; r < m.n; ++r) {
        double s = 0.0;
        for (int c = 0; c < m.n; ++c) s += std::abs(m.at(r, c));
        best = std::max(best, s);
    }
    return best;
}

std::vector<double> sym_eig_inplace(DenseReal& m) {
    std::vector<double> w(static_cast<std::size_t>(m.n));
    const int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', m.n, m.a.data(), m.n, w.data());
    if (info != 0) fail("dsyevd", info, m.n);
    return w;
}

std::vector<double> herm_eig_inplace(DenseComplex& m) {
    std::vector<double> w(static_cast<std::size_t>(m.n));
    const int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', m.n,
                                    reinterpret_cast<lapack_complex_double*>(m.a.data()), m.n,
                                    w.data());
    if (info != 0) fail("zheevd", info, m.n);
    return w;
}

LuComplex::LuComplex(DenseComplex m) : lu_(std::move(m)), ipiv_(static_cast<std::size_t>(lu_.n)) {
    const int info =
        LAPACKE_zgetrf(LAPACK_COL_MAJOR, lu_.n, lu_.n,
                       reinterpret_cast<lapack_complex_double*>(lu_.a.data()), lu_.n,
                       ipiv_.data());
    if (info != 0) fail("zgetrf", info, lu_.n);
}

void LuComplex::solve_inplace(std::vector<cplx>& b) const {
    if (int(b.size()) != lu_.n)
        throw NumericalError("LuComplex::solve_inplace: rhs length mismatch");
    const int info = LAPACKE_zgetrs(
        LAPACK_COL_MAJOR, 'N', lu_.n, 1,
        reinterpret_cast<const lapack_complex_double*>(lu_.a.data()), lu_.n, ipiv_.data(),
        reinterpret_cast<lapack_complex_double*>(b.data()), lu_.n);
    if (info != 0) fail("zgetrs", info, lu_.n);
}

std::vector<double> solve_refined(const DenseReal& m, const std::vector<double>& rhs,
                                  double* rcond_out) {
    const int n = m.n;
    if (int(rhs.size()) != n) throw NumericalError("solve_refined: rhs length mismatch");
    DenseReal a = m;                      // dgesvx may equilibrate in place
    DenseReal af(n);
    std::vector<int> ipiv(static_cast<std::size_t>(n));
    std::vector<double> b = rhs, x(static_cast<std::size_t>(n));
    std::vector<double> r(static_cast<std::size_t>(n)), c(static_cast<std::size_t>(n));
    double rcond = 0.0, ferr = 0.0, berr = 0.0, rpivot = 0.0;
    char equed = 'N';
    const int info = LAPACKE_dgesvx(LAPACK_COL_MAJOR, 'E', 'N', n, 1, a.a.data(), n,
                                    af.a.data(), n, ipiv.data(), &equed, r.data(), c.data(),
                                    b.data(), n, x.data(), n, &rcond, &ferr, &berr, &rpivot);
    if (info > 0 && info <= n) fail("dgesvx (singular factor)", info, n);
    if (info < 0) fail("dgesvx", info, n);
    // info == n+1 flags rcond below machine precision; caller inspects rcond.
    if (rcond_out) *rcond_out = rcond;
    return x;
}

} // namespace ouqm::linalg
