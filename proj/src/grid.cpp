#include "llspec/grid.hpp"

#include <cmath>
#include <string>

#include "llspec/errors.hpp"

namespace llspec {

Grid Grid::make(double L, double dx) {
    if (!(L > 0.0) || !std::isfinite(L)) throw ParameterError("grid: L must be positive");
    if (!(dx > 0.0) || !std::isfinite(dx)) throw ParameterError("grid: dx must be positive");
    const double ratio = L / dx;
    if (ratio > 1e8) throw ParameterError("grid: too many points");
    const long n = std::lround(ratio);
    if (n < 4) throw ParameterError("grid: need at least 4 points");
    if (n % 2 != 0) throw ParameterError("grid: N = round(L/dx) = " + std::to_string(n) + " must be even");
    if (std::abs(n * dx - L) > 1e-9 * L)
        throw ParameterError("grid: L/dx is not an integer (N*dx must equal L)");
    Grid g;
    g.L = L;
    g.dx = dx;
    g.N = static_cast<int>(n);
    return g;
}

int Grid::k_index(double k0) const {
    const double j = k0 / dk();
    const long jr = std::lround(j);
    if (std::abs(j - jr) > 1e-9 * std::max(1.0, std::abs(j)))
        throw ParameterError("k0 = " + std::to_string(k0) + " is not on the momentum lattice 2*pi*j/L");
    if (jr < -N / 2 || jr >= N / 2) throw ParameterError("k0 outside the Brillouin zone");
    return static_cast<int>(jr);
}

}  // namespace llspec
