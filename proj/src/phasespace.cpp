#include "llspec/phasespace.hpp"

#include <cmath>
#include <numbers>

#include "llspec/errors.hpp"
#include "llspec/fft.hpp"

namespace llspec {
namespace {

int fft_to_row(int f, int n) { return (f < n / 2 ? f : f - n) + n / 2; }

}  // namespace

WignerMap wigner(std::span<const std::complex<double>> psi, const Grid& grid) {
    const int n = grid.N;
    if (static_cast<int>(psi.size()) != n) throw ParameterError("wigner: state length != grid N");
    WignerMap w;
    w.grid = grid;
    w.values.assign(static_cast<size_t>(n) * n, 0.0);

    double norm = 0.0;
    for (const auto& z : psi) norm += std::norm(z);
    norm *= grid.dx;
    if (!(norm > 0.0) || !std::isfinite(norm)) throw ParameterError("wigner: zero or non-finite state");
    const double scale = 1.0 / std::sqrt(norm);
    w.renormalized = std::abs(norm - 1.0) > 1e-10;

    // Band-limited interpolation onto the half-step lattice x = j dx/2, j = 0..2N-1.
    fft::cvec c(psi.begin(), psi.end());
    fft::forward(c);
    fft::cvec h(2 * static_cast<size_t>(n), 0.0);
    for (int f = 0; f < n; ++f) {
        const int q = f < n / 2 ? f : f - n;
        h[(q + 2 * n) % (2 * n)] = c[f] * (scale / n);
    }
    fft::backward(h);

    const double pref = grid.dx / (2.0 * std::numbers::pi);
    const int two_n = 2 * n;
    fft::cvec a(n);
    double imag = 0.0;
    for (int x = 0; x < n; ++x) {
        std::fill(a.begin(), a.end(), 0.0);
        for (int m = -n / 2; m <= n / 2; ++m) {
            const auto prod = std::conj(h[((2 * x - m) % two_n + two_n) % two_n]) * h[((2 * x + m) % two_n + two_n) % two_n];
            const double wt = (m == -n / 2 || m == n / 2) ? 0.5 : 1.0;
            a[(m + n) % n] += wt * prod;
        }
        fft::forward(a);
        for (int f = 0; f < n; ++f) {
            w.at(x, fft_to_row(f, n)) = pref * a[f].real();
            imag = std::max(imag, pref * std::abs(a[f].imag()));
        }
    }
    w.imag_residue = imag;
    double total = 0.0;
    for (double v : w.values) total += v;
    w.normalization = total * w.cell();
    return w;
}

WignerMap wigner(std::span<const double> psi, const Grid& grid) {
    std::vector<std::complex<double>> z(psi.begin(), psi.end());
    return wigner(std::span<const std::complex<double>>(z), grid);
}

std::vector<double> momentum_density(std::span<const std::complex<double>> psi, const Grid& grid) {
    const int n = grid.N;
    if (static_cast<int>(psi.size()) != n) throw ParameterError("momentum_density: state length != grid N");
    fft::cvec c(psi.begin(), psi.end());
    fft::forward(c);
    std::vector<double> rho(n);
    const double pref = grid.dx * grid.dx / (2.0 * std::numbers::pi);
    for (int f = 0; f < n; ++f) rho[fft_to_row(f, n)] = pref * std::norm(c[f]);
    return rho;
}

double phase_space_product(const PhaseGrid& a, const PhaseGrid& b) {
    if (!(a.grid == b.grid)) throw ParameterError("phase_space_product: grid mismatch");
    double s = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
    return s * a.cell();
}

double ghost_mass(const WignerMap& w, double k0) {
    const Grid& g = w.grid;
    const double zone = 2.0 * std::numbers::pi / g.dx;
    double s = 0.0;
    for (int r = 0; r < g.N; ++r) {
        double d = std::remainder(g.k_row(r) - k0, zone);
        if (std::abs(d) <= 0.5 * std::numbers::pi / g.dx) continue;
        for (int x = 0; x < g.N; ++x) s += std::abs(w.at(x, r));
    }
    return s * w.cell();
}

WignerMap average_wigner(const EigenSolution& sol, double E, double alpha) {
    if (!(alpha >= 0.0) || !std::isfinite(E)) throw ParameterError("average_wigner: need finite E and alpha >= 0");
    const double half = alpha * std::abs(E);
    WignerMap avg;
    avg.grid = sol.grid;
    avg.values.assign(static_cast<size_t>(sol.grid.N) * sol.grid.N, 0.0);
    int count = 0;
    for (int a = 0; a < sol.size(); ++a) {
        if (std::abs(sol.energies[a] - E) > half) continue;
        const WignerMap w = wigner(sol.state(a), sol.grid);
        for (size_t i = 0; i < avg.values.size(); ++i) avg.values[i] += w.values[i];
        avg.imag_residue = std::max(avg.imag_residue, w.imag_residue);
        ++count;
    }
    if (count == 0) throw EmptyWindowError("average_wigner: no eigenstate in the energy window");
    double total = 0.0;
    for (double& v : avg.values) {
        v /= count;
        total += v;
    }
    avg.normalization = total * avg.cell();
    return avg;
}

WeylSymbol weyl_symbol(std::span<const double> v, const Grid& grid) {
    if (static_cast<int>(v.size()) != grid.N) throw ParameterError("weyl_symbol: length != grid N");
    WeylSymbol s;
    s.grid = grid;
    s.values.resize(static_cast<size_t>(grid.N) * grid.N);
    for (int r = 0; r < grid.N; ++r) {
        const double k = grid.k_row(r);
        for (int x = 0; x < grid.N; ++x) s.at(x, r) = 0.5 * k * k + v[x];
    }
    return s;
}

double expectation(const WignerMap& w, const WeylSymbol& symbol) { return phase_space_product(w, symbol); }

Histogram ll_energy_distribution(const WignerMap& w, const WeylSymbol& symbol, const BinSpec& bins) {
    if (!(w.grid == symbol.grid)) throw ParameterError("ll_energy_distribution: grid mismatch");
    HistogramAccumulator acc(bins);
    const double cell = w.cell();
    for (size_t i = 0; i < w.values.size(); ++i) acc.add(symbol.values[i], w.values[i] * cell);
    acc.add_count(1);
    return acc.finish();
}

double capture_efficiency(const PhaseGrid& F, const WeylSymbol& symbol, double E, double alpha) {
    if (!(F.grid == symbol.grid)) throw ParameterError("capture_efficiency: grid mismatch");
    const double level = E + alpha * std::abs(E);
    double mass = 0.0;
    long cells = 0;
    for (size_t i = 0; i < F.values.size(); ++i) {
        if (symbol.values[i] > level) continue;
        mass += std::max(F.values[i], 0.0);
        ++cells;
    }
    return cells == 0 ? 0.0 : mass / static_cast<double>(cells);
}

}  // namespace llspec
