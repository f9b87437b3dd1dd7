#pragma once

#include <cmath>
#include <numbers>

namespace llspec {

// Periodic 1D lattice x_n = n*dx, n = 0..N-1, with momenta k_j = 2*pi*j/L, j in [-N/2, N/2).
// Units: hbar = m = sigma = 1, so energies are in units of E_sigma and eta = V0.
struct Grid {
    double L = 0.0;
    double dx = 0.0;
    int N = 0;

    // Throws ParameterError unless L > 0, dx > 0, N = round(L/dx) is even and >= 4,
    // and N*dx reproduces L to one part in 1e9.
    static Grid make(double L, double dx);

    double x(int n) const { return n * dx; }
    double dk() const { return 2.0 * std::numbers::pi / L; }
    // Momentum of row r = j + N/2 of a phase-space map.
    double k_row(int r) const { return (r - N / 2) * dk(); }
    // Momentum of FFT bin f (0..N-1), using the [-N/2, N/2) convention.
    double k_fft(int f) const { return (f < N / 2 ? f : f - N) * dk(); }
    // Integer j with k0 = 2*pi*j/L; throws ParameterError if k0 is off the lattice.
    int k_index(double k0) const;
    // Discrete kinetic energy (1 - cos k dx)/dx^2 of a lattice plane wave.
    double lattice_kinetic(double k) const { return (1.0 - std::cos(k * dx)) / (dx * dx); }

    bool operator==(const Grid& o) const { return N == o.N && L == o.L && dx == o.dx; }
};

}  // namespace llspec
