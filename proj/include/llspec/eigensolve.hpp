#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "llspec/disorder.hpp"
#include "llspec/grid.hpp"

namespace llspec {

using Window = std::pair<double, double>;

// Eigenpairs of the periodic stencil Hamiltonian
//   (H psi)_n = (2 psi_n - psi_{n-1} - psi_{n+1}) / (2 dx^2) + V_n psi_n, indices mod N.
// States are real and dx-weighted normalized: dx * sum_n phi(n)^2 = 1.
struct EigenSolution {
    Grid grid;
    std::vector<double> energies;  // ascending
    std::vector<double> states;    // state a is states[a*N, (a+1)*N)
    std::optional<Window> window;

    int size() const { return static_cast<int>(energies.size()); }
    std::span<const double> state(int a) const {
        return {states.data() + static_cast<size_t>(a) * grid.N, static_cast<size_t>(grid.N)};
    }
};

// Gershgorin bounds of the spectrum: [min V, 2/dx^2 + max V].
Window spectrum_bounds(const Potential& p);

// y = H x.
void apply_hamiltonian(const Potential& p, std::span<const double> x, std::span<double> y);

// Number of eigenvalues below E (Sylvester inertia of H - E).
long eigen_count(const Potential& p, double E);

// Lowest eigenvalue, absolute tolerance well below 1e-8.
double ground_energy(const Potential& p);

// All eigenpairs, or those with E_lo <= E_a <= E_hi. Eigenvalues by Sturm bisection,
// eigenvectors by inverse iteration (re-orthogonalized inside near-degenerate clusters).
EigenSolution eigs(const Potential& p, std::optional<Window> window = std::nullopt);

// |<k0|phi_a>|^2 with <k0|phi> = (dx/sqrt(L)) sum_n exp(-i k0 n dx) phi(n), phi dx-normalized.
// Throws ParameterError if k0 is off the momentum lattice.
std::vector<double> momentum_overlap(const EigenSolution& sol, double k0);

// Spectral measure of the lattice plane wave |k0>: every eigenvalue E_a with weight
// |<k0|phi_a>|^2, computed without eigenvectors (probe-tracking band reduction and QL).
struct SpectralMeasure {
    std::vector<double> energies;  // ascending
    std::vector<double> weights;
};
SpectralMeasure plane_wave_measure(const Potential& p, double k0);

// Same for a batch; results are bit-identical to the single call for each member.
// Throws NumericalError if any member fails; failed members are reported via `ok`
// when it is non-null (then no exception is thrown).
std::vector<SpectralMeasure> plane_wave_measures(std::span<const Potential* const> batch, double k0,
                                                 std::vector<bool>* ok = nullptr);

}  // namespace llspec
