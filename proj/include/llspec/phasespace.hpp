#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "llspec/eigensolve.hpp"
#include "llspec/grid.hpp"
#include "llspec/histogram.hpp"
#include "llspec/landscape.hpp"

namespace llspec {

// Real function on the lattice (x_n, k_r), r = j + N/2; values[r*N + n] (row = fixed k).
struct PhaseGrid {
    Grid grid;
    std::vector<double> values;

    int N() const { return grid.N; }
    double& at(int n, int r) { return values[static_cast<size_t>(r) * grid.N + n]; }
    double at(int n, int r) const { return values[static_cast<size_t>(r) * grid.N + n]; }
    // Phase-space cell dx * dk.
    double cell() const { return grid.dx * grid.dk(); }
};

struct WignerMap : PhaseGrid {
    double normalization = 0.0;  // sum W * cell of the (normalized) input
    bool renormalized = false;   // input was not dx-normalized and was rescaled
    double imag_residue = 0.0;   // max |Im| of the transform before taking the real part
};

// H(x, k) = k^2/2 + v(x) with the continuum kinetic term.
struct WeylSymbol : PhaseGrid {};

// W(x_n, k_j) = (dx/2pi) sum_{m=-N/2}^{N/2} w_m exp(-i k_j m dx) psi*(x_n - m dx/2) psi(x_n + m dx/2),
// w_{+-N/2} = 1/2. Half-step samples come from band-limited interpolation (Nyquist term
// kept at -N/2). One length-N FFT per x_n.
WignerMap wigner(std::span<const std::complex<double>> psi, const Grid& grid);
WignerMap wigner(std::span<const double> psi, const Grid& grid);

// Momentum density (dx^2/2pi) |sum_n exp(-i k_j x_n) psi_n|^2 by row r = j + N/2.
std::vector<double> momentum_density(std::span<const std::complex<double>> psi, const Grid& grid);

// sum W1 W2 * cell; for band-limited states 2pi times this equals |<psi1|psi2>|^2.
double phase_space_product(const PhaseGrid& a, const PhaseGrid& b);

// Mass sum |W| * cell in rows with |k - k0| > pi/(2 dx) (distance wrapped to the zone).
double ghost_mass(const WignerMap& w, double k0);

// Mean Wigner map of the states with |E_a - E| <= alpha |E|. Throws EmptyWindowError.
WignerMap average_wigner(const EigenSolution& sol, double E, double alpha = 0.2);

WeylSymbol weyl_symbol(std::span<const double> v, const Grid& grid);

struct Polyline {
    std::vector<std::pair<double, double>> points;  // (x, k); x unwrapped along the line
    bool closed = false;
};

struct ContourSet {
    double level = 0.0;
    std::vector<Polyline> lines;
};

// Marching squares on the lattice, periodic in x, linear edge interpolation; saddle
// cells are resolved by the cell average. Empty when E is outside the symbol range.
ContourSet level_set(const WeylSymbol& symbol, double E);

// sum W * symbol * cell.
double expectation(const WignerMap& w, const WeylSymbol& symbol);

// Energy distribution: W * cell deposited in the bin of the symbol value; signed,
// normalized to total mass 1.
Histogram ll_energy_distribution(const WignerMap& w, const WeylSymbol& symbol, const BinSpec& bins);

// [sum over {symbol <= E + alpha E} of max(F, 0) * cell] / [area of that set].
// Zero when the set is empty.
double capture_efficiency(const PhaseGrid& F, const WeylSymbol& symbol, double E, double alpha);

}  // namespace llspec
