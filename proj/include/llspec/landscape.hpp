#pragma once

#include <span>
#include <vector>

#include "llspec/disorder.hpp"
#include "llspec/grid.hpp"

namespace llspec {

// Solution of H u = 1 on the periodic stencil, with V replaced by V + shift.
struct Landscape {
    Grid grid;
    std::vector<double> u;    // > 0
    std::vector<double> v_u;  // 1/u - shift
    double shift = 0.0;
    double epsilon = 0.0;                 // eps in shift = -E0 + eps
    double ground_energy_used = 0.0;      // E0, NaN when no shift was applied
};

// Shift rule: if the lowest eigenvalue E0 of H is <= 0, V is shifted by -E0 + eps with
// eps = epsilon_fraction * V0; otherwise no shift. E0 is only computed when min V <= 0.
// Throws NumericalError if the shifted system is singular or u is not positive.
Landscape solve_landscape(const Potential& p, double epsilon_fraction = 0.1);

// Solves with an explicit shift s (V + s must give a positive definite H).
Landscape solve_landscape_shifted(const Potential& p, double shift);

// max_n |(H_s u)_n - 1| for the shift recorded in `l`.
double landscape_residual(const Potential& p, const Landscape& l);

// Weyl-law state count (1/2pi) sum_n dx * 2 sqrt(2 max(E - v_n, 0)): the phase-space
// volume of {k^2/2 + v(x) <= E} over 2pi. Use v = V or v = V_u.
double idos_weyl(std::span<const double> v, const Grid& grid, double E);

}  // namespace llspec
