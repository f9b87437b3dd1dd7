#include "llspec/landscape.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "llspec/eigensolve.hpp"
#include "llspec/errors.hpp"

namespace llspec {
namespace {

// Periodic tridiagonal solve with constant off-diagonal t: Thomas elimination on the
// matrix with modified corners plus a Sherman-Morrison rank-one correction.
class CyclicSolver {
public:
    CyclicSolver(std::vector<double> diag, double t) : n_(static_cast<int>(diag.size())), t_(t) {
        gamma_ = -diag[0];
        diag[0] -= gamma_;
        diag[n_ - 1] -= t * t / gamma_;
        cp_.resize(n_);
        den_.resize(n_);
        double prev = 0.0;
        for (int i = 0; i < n_; ++i) {
            const double den = diag[i] - (i > 0 ? t * prev : 0.0);
            if (den == 0.0 || !std::isfinite(den)) throw NumericalError("landscape: singular periodic system");
            den_[i] = den;
            prev = t / den;
            cp_[i] = prev;
        }
        z_.assign(n_, 0.0);
        z_[0] = gamma_;
        z_[n_ - 1] = t;
        thomas(z_);
        denom_ = 1.0 + z_[0] + t * z_[n_ - 1] / gamma_;
        if (denom_ == 0.0 || !std::isfinite(denom_)) throw NumericalError("landscape: singular periodic system");
    }

    void solve(std::vector<double>& r) const {
        thomas(r);
        const double f = (r[0] + t_ * r[n_ - 1] / gamma_) / denom_;
        for (int i = 0; i < n_; ++i) r[i] -= f * z_[i];
    }

private:
    void thomas(std::vector<double>& r) const {
        r[0] /= den_[0];
        for (int i = 1; i < n_; ++i) r[i] = (r[i] - t_ * r[i - 1]) / den_[i];
        for (int i = n_ - 2; i >= 0; --i) r[i] -= cp_[i] * r[i + 1];
    }

    int n_;
    double t_, gamma_ = 0.0, denom_ = 0.0;
    std::vector<double> cp_, den_, z_;
};

double residual_max(const std::vector<double>& a, double t, const std::vector<double>& u, std::vector<double>* r) {
    const int n = static_cast<int>(u.size());
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
        const double res = 1.0 - (a[i] * u[i] + t * (u[(i + n - 1) % n] + u[(i + 1) % n]));
        if (r) (*r)[i] = res;
        m = std::max(m, std::abs(res));
    }
    return m;
}

Landscape solve_with(const Potential& p, double shift, double epsilon, double e0) {
    const int n = p.grid.N;
    const double inv = 1.0 / (p.grid.dx * p.grid.dx);
    const double t = -0.5 * inv;
    std::vector<double> a(n);
    for (int i = 0; i < n; ++i) a[i] = inv + p.V[i] + shift;
    const CyclicSolver solver(a, t);
    std::vector<double> u(n, 1.0), r(n);
    solver.solve(u);
    // Iterative refinement on the residual.
    for (int it = 0; it < 3 && residual_max(a, t, u, &r) > 1e-13; ++it) {
        solver.solve(r);
        for (int i = 0; i < n; ++i) u[i] += r[i];
    }
    Landscape l;
    l.grid = p.grid;
    l.shift = shift;
    l.epsilon = epsilon;
    l.ground_energy_used = e0;
    l.v_u.resize(n);
    for (int i = 0; i < n; ++i) {
        if (!(u[i] > 0.0) || !std::isfinite(u[i])) throw NumericalError("landscape: u is not positive (shift too small)");
        l.v_u[i] = 1.0 / u[i] - shift;
    }
    l.u = std::move(u);
    return l;
}

}  // namespace

Landscape solve_landscape(const Potential& p, double epsilon_fraction) {
    if (!(epsilon_fraction > 0.0) || !std::isfinite(epsilon_fraction))
        throw ParameterError("landscape: epsilon fraction must be positive");
    const double eps = epsilon_fraction * p.disorder.V0;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (p.min() > 0.0) return solve_with(p, 0.0, eps, nan);
    const double e0 = ground_energy(p);
    if (e0 > 0.0) return solve_with(p, 0.0, eps, nan);
    return solve_with(p, -e0 + eps, eps, e0);
}

Landscape solve_landscape_shifted(const Potential& p, double shift) {
    if (!std::isfinite(shift)) throw ParameterError("landscape: non-finite shift");
    if (p.min() + shift <= 0.0 && ground_energy(p) + shift <= 0.0)
        throw NumericalError("landscape: shifted ground energy is not positive");
    return solve_with(p, shift, std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN());
}

double landscape_residual(const Potential& p, const Landscape& l) {
    const int n = p.grid.N;
    const double inv = 1.0 / (p.grid.dx * p.grid.dx);
    std::vector<double> a(n);
    for (int i = 0; i < n; ++i) a[i] = inv + p.V[i] + l.shift;
    return residual_max(a, -0.5 * inv, l.u, nullptr);
}

double idos_weyl(std::span<const double> v, const Grid& grid, double E) {
    if (!std::isfinite(E)) throw ParameterError("idos_weyl: E must be finite");
    double s = 0.0;
    for (double vn : v)
        if (E > vn) s += std::sqrt(2.0 * (E - vn));
    return s * 2.0 * grid.dx / (2.0 * std::numbers::pi);
}

}  // namespace llspec
