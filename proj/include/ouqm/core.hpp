#pragma once

// Shared numerical vocabulary: normalized oscillator eigenfunctions,
// polynomial potential evaluation and grid inner products.

#include <span>
#include <vector>

#include "ouqm/types.hpp"

namespace ouqm {

struct PotentialValue {
    double value;
    double d1;
    double d2;
};

// Orthonormal oscillator eigenfunction H_n(q) (unit L2 norm, the Gaussian
// weight absorbed). Evaluated by the normalized three-term recurrence
//   H_{n+1} = sqrt(2/(n+1)) q H_n - sqrt(n/(n+1)) H_{n-1},
// which is stable for all n. Returns 0 exactly once the Gaussian factor
// underflows.
double hermite_function(int n, double q);

// Row-major table h[n][i] = H_n(q[i]) for n = 0..n_max.
std::vector<std::vector<double>> hermite_table(int n_max, std::span<const double> q);

// V, V', V'' at a point; Horner on the exact derivative coefficient sets.
PotentialValue potential_eval(const Potential& pot, double x);

// Batched variant over a grid. Output spans may be empty to skip a quantity.
void potential_eval_grid(const Potential& pot, std::span<const double> x,
                         std::span<double> v, std::span<double> d1, std::span<double> d2);

// Trapezoid approximation of the bracket integral(conj(f) g dx).
cplx grid_inner_product(std::span<const cplx> f, std::span<const cplx> g, const XGrid& grid);
double grid_inner_product(std::span<const double> f, std::span<const double> g,
                          const XGrid& grid);

// sqrt(<f|f>) under the trapezoid rule.
double grid_norm(std::span<const cplx> f, const XGrid& grid);
double grid_norm(std::span<const double> f, const XGrid& grid);

// Centered first difference with Dirichlet ghosts (the same stencil the
// operator assembly uses): out_i = (f_{i+1} - f_{i-1}) / (2 dx).
std::vector<double> centered_diff(std::span<const double> f, double dx);
std::vector<cplx> centered_diff(std::span<const cplx> f, double dx);

// One-sided second-order stencils at the two wall points, centered inside.
// Used where a field derivative (not the operator stencil) is wanted.
std::vector<double> derivative_field(std::span<const double> f, double dx);

} // namespace ouqm
