#pragma once

// Diagonalization of the coupled operator, mode-sector classification of the
// eigenstates, and observable extraction.

#include <optional>
#include <span>
#include <vector>

#include "ouqm/operators.hpp"
#include "ouqm/types.hpp"

namespace ouqm {

// Coefficient field xi_n(x_i) of a coupled state, mode-major layout
// (row n occupies [n*n_points, (n+1)*n_points)).
struct CoupledWavefunction {
    XGrid grid;
    HermiteBasis basis;
    std::vector<cplx> coeff;

    std::span<const cplx> mode(int n) const {
        return {coeff.data() + std::size_t(n) * grid.n_points, std::size_t(grid.n_points)};
    }
    std::span<cplx> mode(int n) {
        return {coeff.data() + std::size_t(n) * grid.n_points, std::size_t(grid.n_points)};
    }

    // Trapezoid norm over all modes and the grid.
    double norm() const;
    void normalize();
    // Fraction of the squared norm carried by mode n.
    double mode_weight(int n) const;
};

struct SectorInfo {
    int sector = 0;
    double weight = 0.0;
    bool mixed = false; // weight < 0.5
};

struct SpectralEntry {
    double energy = 0.0;
    int sector = 0;
    double sector_weight = 0.0;
    bool mixed = false;
    // Grid-parity partner bookkeeping: the centered first difference carries
    // an exact (-1)^(n+i) symmetry, so smooth states come in (near-)
    // degenerate pairs with a lattice-scale partner. Pairs are rotated so
    // one member carries the smooth content; the other is flagged spurious.
    bool spurious = false;
    bool paired = false;
    double pair_split = 0.0;
    double residual = 0.0; // ||A v - E v||_2
};

struct SpectralResult {
    std::vector<SpectralEntry> entries;           // ascending energy
    std::vector<CoupledWavefunction> states;      // parallel to entries
    double op_norm_inf = 0.0;
};

struct SolveOptions {
    int k = 8;                       // states to return (after filtering)
    std::optional<int> sector;       // restrict to one mode sector
    bool include_spurious = false;   // keep grid-parity partners in output
    double pair_tol = 1e-9;          // relative tie window for pairing
    bool use_hermitian_solver = false; // zheevd on the complex matrix instead
                                       // of dsyevd on the mode-phase rotation
};

SpectralResult solve_coupled(const CoupledOperator& op, const SolveOptions& opts);

// Convenience: k lowest states regardless of sector.
SpectralResult solve_coupled(const CoupledOperator& op, int k);

SectorInfo classify_sector(const CoupledWavefunction& state);

// P(x_i) = sum_n |xi_n(x_i)|^2; integrates to 1 for a normalized state.
std::vector<double> position_density(const CoupledWavefunction& state);

struct SchrodingerSpectrum {
    std::vector<double> energies;
    std::vector<std::vector<double>> states; // grid-normalized, sign-fixed
};

SchrodingerSpectrum solve_schrodinger(const SchrodingerOperator& op, int k);

} // namespace ouqm
