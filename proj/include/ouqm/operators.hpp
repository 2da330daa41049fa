#pragma once

// Assembly of the discrete operators: the coupled (x,q) stationary operator
// in the oscillator-mode representation and the plain Schrodinger
// Hamiltonians used by the tau_c expansion.

#include <span>
#include <string>
#include <vector>

#include "ouqm/linalg.hpp"
#include "ouqm/types.hpp"

namespace ouqm {

// Coupled-mode operator. Acting on stacked mode fields (xi_0, ..., xi_nmax),
// row block n reads
//
//   (A xi)_n = [-(hbar/tau_c)(n + 1/2) + V(x)] xi_n
//              + i c [ sqrt(n) D xi_{n-1} + sqrt(n+1) D xi_{n+1} ],
//
// with c = sqrt(hbar^3 / (2 m tau_c)) and D the centered first difference
// with Dirichlet ghosts. D is real antisymmetric, so the i c D coupling
// blocks are Hermitian-conjugate pairs and A is Hermitian entrywise by
// construction. Index layout: (mode n, point i) -> n*n_points + i.
class CoupledOperator {
public:
    CoupledOperator(PhysicalParams params, Potential pot, XGrid grid, HermiteBasis basis);

    int dim() const { return basis_.modes() * grid_.n_points; }
    const PhysicalParams& params() const { return params_; }
    const Potential& potential() const { return pot_; }
    const XGrid& grid() const { return grid_; }
    const HermiteBasis& basis() const { return basis_; }

    // Dense Hermitian matrix (column-major).
    const linalg::DenseComplex& matrix() const { return dense_; }
    double norm_inf() const { return norm_inf_; }

    // Mode-diagonal entries -(hbar/tau_c)(n+1/2) + V(x_i), length dim().
    const std::vector<double>& diagonal() const { return diag_; }

    // y = A x through the block structure; O(n_max * n_points) work.
    void apply(std::span<const cplx> x, std::span<cplx> y) const;

    // Same spectrum as matrix() under the diagonal mode-phase rotation
    // xi_n -> i^n xi_n, which turns the i c D couplings into +/- c D:
    // real symmetric, so the cheaper symmetric eigensolver applies.
    // Eigenvectors transform back per mode with (-i)^n.
    linalg::DenseReal real_rotation() const;

    // Plain-text triplet dump (row, col, re, im) of the nonzero entries.
    std::string dump_triplets() const;

private:
    PhysicalParams params_;
    Potential pot_;
    XGrid grid_;
    HermiteBasis basis_;
    std::vector<double> diag_;      // length dim()
    std::vector<double> couple_;    // c*sqrt(n+1), n = 0..n_max-1
    double inv2dx_ = 0.0;
    linalg::DenseComplex dense_;
    double norm_inf_ = 0.0;
};

// Real symmetric Schrodinger Hamiltonian H = -(hbar^2 / 2 m_eff) d2/dx2 + V
// with the three-point stencil and Dirichlet ghosts.
struct SchrodingerOperator {
    PhysicalParams params;
    Potential pot;
    XGrid grid;
    double mass_eff = 1.0;
    linalg::DenseReal matrix;

    int dim() const { return grid.n_points; }
};

CoupledOperator assemble_coupled(const PhysicalParams& params, const Potential& pot,
                                 const XGrid& grid, const HermiteBasis& basis);

SchrodingerOperator assemble_schrodinger(const PhysicalParams& params, const Potential& pot,
                                         const XGrid& grid, double mass_eff);

// Variant whose kinetic term is the composed first-difference Laplacian
// D(D .) (the one the coupled operator induces on its slow sector). Used by
// consistency studies that compare the expansion against direct coupled
// solves on the same footing.
SchrodingerOperator assemble_schrodinger_wide(const PhysicalParams& params, const Potential& pot,
                                              const XGrid& grid, double mass_eff);

} // namespace ouqm
