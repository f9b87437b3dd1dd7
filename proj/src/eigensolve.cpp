#include "llspec/eigensolve.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <complex>
#include <numbers>

#include "llspec/errors.hpp"

namespace llspec {
namespace {

constexpr int kLanes = 8;

// Diagonal a_n = 1/dx^2 + V_n, hopping t = -1/(2 dx^2) on neighbors and the corners.
struct Chain {
    int n = 0;
    double t = 0.0;
    std::vector<double> a;
    double pivmin = 0.0;
    double hnorm = 0.0;

    explicit Chain(const Potential& p) : n(p.grid.N), a(p.grid.N) {
        const double inv = 1.0 / (p.grid.dx * p.grid.dx);
        t = -0.5 * inv;
        double amax = 0.0;
        for (int i = 0; i < n; ++i) {
            a[i] = inv + p.V[i];
            amax = std::max(amax, std::abs(a[i]));
        }
        hnorm = amax + 2.0 * std::abs(t);
        pivmin = DBL_MIN * std::max(1.0, t * t);
    }
};

// Inertia of H - x for up to kLanes shifts at once. The last site is ordered last, so
// H - x = [[A, w], [w^T, c]] with A tridiagonal and w = t (e_0 + e_{N-2});
// count = negatives of the LDL^T pivots of A plus [c - w^T A^{-1} w < 0].
void count_lanes(const Chain& h, const double* x, long* out) {
    const int n = h.n;
    const double t = h.t, t2 = t * t, pm = h.pivmin;
    double D[kLanes], g[kLanes], c[kLanes], cnt[kLanes];
    for (int l = 0; l < kLanes; ++l) {
        D[l] = h.a[0] - x[l];
        g[l] = t;
        c[l] = h.a[n - 1] - x[l];
        cnt[l] = 0.0;
    }
    for (int i = 1; i < n - 1; ++i) {
        const double ai = h.a[i];
        const double wi = (i == n - 2) ? t : 0.0;
        for (int l = 0; l < kLanes; ++l) {
            double d = D[l];
            d = std::abs(d) < pm ? -pm : d;
            cnt[l] += d < 0.0 ? 1.0 : 0.0;
            const double inv = 1.0 / d;
            c[l] -= g[l] * g[l] * inv;
            g[l] = wi - t * g[l] * inv;
            D[l] = ai - x[l] - t2 * inv;
        }
    }
    for (int l = 0; l < kLanes; ++l) {
        double d = D[l];
        d = std::abs(d) < pm ? -pm : d;
        cnt[l] += d < 0.0 ? 1.0 : 0.0;
        c[l] -= g[l] * g[l] / d;
        out[l] = static_cast<long>(cnt[l]) + (c[l] < 0.0 ? 1 : 0);
    }
}

long count_one(const Chain& h, double x) {
    double xs[kLanes];
    long o[kLanes];
    std::fill(xs, xs + kLanes, x);
    count_lanes(h, xs, o);
    return o[0];
}

struct Interval {
    double lo, hi;
    long clo, chi;  // counts below lo and below hi
};

// Eigenvalues with index in [count(lo), count(hi)), by lane-parallel bisection.
std::vector<double> bisect(const Chain& h, double lo, double hi) {
    const long clo = count_one(h, lo);
    const long chi = count_one(h, hi);
    std::vector<double> ev(std::max(0L, chi - clo));
    std::vector<Interval> work;
    if (chi > clo) work.push_back({lo, hi, clo, chi});
    const double tol0 = 4.0 * DBL_EPSILON * h.hnorm;
    while (!work.empty()) {
        const int m = std::min<int>(kLanes, static_cast<int>(work.size()));
        Interval cur[kLanes];
        double xs[kLanes];
        long cs[kLanes];
        for (int l = 0; l < m; ++l) {
            cur[l] = work.back();
            work.pop_back();
            xs[l] = 0.5 * (cur[l].lo + cur[l].hi);
        }
        for (int l = m; l < kLanes; ++l) xs[l] = xs[0];
        count_lanes(h, xs, cs);
        for (int l = 0; l < m; ++l) {
            const Interval a = cur[l];
            const double mid = xs[l];
            const long cm = std::clamp(cs[l], a.clo, a.chi);
            const Interval parts[2] = {{a.lo, mid, a.clo, cm}, {mid, a.hi, cm, a.chi}};
            for (const auto& p : parts) {
                if (p.chi <= p.clo) continue;
                const double tol = std::max(tol0, 2.0 * DBL_EPSILON * std::max(std::abs(p.lo), std::abs(p.hi)));
                const double pm = 0.5 * (p.lo + p.hi);
                if (p.hi - p.lo <= tol || pm <= p.lo || pm >= p.hi) {
                    for (long j = p.clo; j < p.chi; ++j) ev[j - clo] = pm;
                } else {
                    work.push_back(p);
                }
            }
        }
    }
    return ev;
}

// Folded ordering: site s < N/2 -> 2s, site s >= N/2 -> 2(N-1-s)+1. The ring becomes a
// matrix of half-bandwidth 2, so banded elimination needs no corner handling.
std::vector<int> fold_positions(int n) {
    std::vector<int> pos(n);
    for (int s = 0; s < n; ++s) pos[s] = s < n / 2 ? 2 * s : 2 * (n - 1 - s) + 1;
    return pos;
}

// LU with partial pivoting of the folded H - lambda (kl = ku = 2, U bandwidth 4).
class FoldedLU {
public:
    FoldedLU(const Chain& h, const std::vector<int>& pos) : n_(h.n), diag_(h.n), d1_(h.n, 0.0), d2_(h.n, 0.0) {
        for (int s = 0; s < n_; ++s) {
            diag_[pos[s]] = h.a[s];
            const int p = pos[s], q = pos[(s + 1) % n_];
            const int lo = std::min(p, q), dist = std::abs(p - q);
            (dist == 1 ? d1_ : d2_)[lo] = h.t;
        }
        ab_.resize(static_cast<size_t>(n_) * 7);
        lm_.resize(static_cast<size_t>(n_) * 2);
        piv_.resize(n_);
        small_ = DBL_EPSILON * h.hnorm;
    }

    void factor(double lambda) {
        const int n = n_;
        std::fill(ab_.begin(), ab_.end(), 0.0);
        for (int p = 0; p < n; ++p) {
            double* r = &ab_[static_cast<size_t>(p) * 7];  // columns p-2 .. p+4
            r[2] = diag_[p] - lambda;
            if (p >= 1) r[1] = d1_[p - 1];
            if (p >= 2) r[0] = d2_[p - 2];
            if (p + 1 < n) r[3] = d1_[p];
            if (p + 2 < n) r[4] = d2_[p];
        }
        for (int k = 0; k < n; ++k) {
            const int last = std::min(n - 1, k + 2);
            int p = k;
            double best = std::abs(at(k, k));
            for (int i = k + 1; i <= last; ++i) {
                if (std::abs(at(i, k)) > best) {
                    best = std::abs(at(i, k));
                    p = i;
                }
            }
            piv_[k] = p;
            const int jmax = std::min(n - 1, k + 4);
            if (p != k)
                for (int j = k; j <= jmax; ++j) std::swap(at(k, j), at(p, j));
            if (at(k, k) == 0.0) at(k, k) = small_;
            const double inv = 1.0 / at(k, k);
            for (int i = k + 1; i <= last; ++i) {
                const double l = at(i, k) * inv;
                lm_[static_cast<size_t>(k) * 2 + (i - k - 1)] = l;
                at(i, k) = 0.0;
                if (l != 0.0)
                    for (int j = k + 1; j <= jmax; ++j) at(i, j) -= l * at(k, j);
            }
        }
    }

    void solve(std::vector<double>& x) const {
        const int n = n_;
        for (int k = 0; k < n; ++k) {
            if (piv_[k] != k) std::swap(x[k], x[piv_[k]]);
            const double xk = x[k];
            if (k + 1 < n) x[k + 1] -= lm_[static_cast<size_t>(k) * 2] * xk;
            if (k + 2 < n) x[k + 2] -= lm_[static_cast<size_t>(k) * 2 + 1] * xk;
        }
        for (int k = n - 1; k >= 0; --k) {
            const double* r = &ab_[static_cast<size_t>(k) * 7];
            double s = x[k];
            const int jmax = std::min(n - 1, k + 4);
            for (int j = k + 1; j <= jmax; ++j) s -= r[j - k + 2] * x[j];
            x[k] = s / r[2];
        }
    }

private:
    double& at(int i, int j) { return ab_[static_cast<size_t>(i) * 7 + (j - i + 2)]; }

    int n_;
    std::vector<double> diag_, d1_, d2_;
    std::vector<double> ab_, lm_;
    std::vector<int> piv_;
    double small_ = 0.0;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void normalize(std::vector<double>& x) {
    const double nrm = std::sqrt(dot(x, x));
    for (double& v : x) v /= nrm;
}

// (H x)_s for a vector given in folded order.
double apply_site(const Chain& h, const std::vector<int>& pos, const std::vector<double>& xf, int s) {
    const int n = h.n;
    return h.a[s] * xf[pos[s]] + h.t * (xf[pos[(s + n - 1) % n]] + xf[pos[(s + 1) % n]]);
}

double rayleigh(const Chain& h, const std::vector<int>& pos, const std::vector<double>& xf) {
    double r = 0.0;
    for (int s = 0; s < h.n; ++s) r += xf[pos[s]] * apply_site(h, pos, xf, s);
    return r;
}

// max_s |(H x)_s - lambda x_s| of a unit vector in folded order.
double residual(const Chain& h, const std::vector<int>& pos, const std::vector<double>& xf, double lambda) {
    double r = 0.0;
    for (int s = 0; s < h.n; ++s) r = std::max(r, std::abs(apply_site(h, pos, xf, s) - lambda * xf[pos[s]]));
    return r;
}

}  // namespace

Window spectrum_bounds(const Potential& p) {
    return {p.min(), 2.0 / (p.grid.dx * p.grid.dx) + p.max()};
}

void apply_hamiltonian(const Potential& p, std::span<const double> x, std::span<double> y) {
    const int n = p.grid.N;
    const double inv = 1.0 / (p.grid.dx * p.grid.dx);
    for (int s = 0; s < n; ++s) {
        const double xl = x[(s + n - 1) % n], xr = x[(s + 1) % n];
        y[s] = inv * x[s] - 0.5 * inv * (xl + xr) + p.V[s] * x[s];
    }
}

long eigen_count(const Potential& p, double E) { return count_one(Chain(p), E); }

double ground_energy(const Potential& p) {
    const Chain h(p);
    const double vmin = p.min();
    double lo = vmin - 1e-9 * (1.0 + std::abs(vmin));
    double hi = p.mean() + 1e-9 * (1.0 + std::abs(p.mean()));
    // Multisection: kLanes interior points per pass.
    while (hi - lo > 1e-13 * std::max(1.0, std::abs(lo) + std::abs(hi))) {
        double xs[kLanes];
        long cs[kLanes];
        for (int l = 0; l < kLanes; ++l) xs[l] = lo + (hi - lo) * (l + 1) / (kLanes + 1);
        count_lanes(h, xs, cs);
        double nlo = lo, nhi = hi;
        for (int l = 0; l < kLanes; ++l) {
            if (cs[l] >= 1) {
                nhi = xs[l];
                break;
            }
            nlo = xs[l];
        }
        if (nlo == lo && nhi == hi) break;
        lo = nlo;
        hi = nhi;
    }
    return 0.5 * (lo + hi);
}

EigenSolution eigs(const Potential& p, std::optional<Window> window) {
    const Chain h(p);
    const int n = h.n;
    const auto [smin, smax] = spectrum_bounds(p);
    // Bisection brackets are padded; the final selection uses the refined energies.
    const double pad = 1e-7 * (1.0 + h.hnorm);
    double lo = smin, hi = smax;
    if (window) {
        if (!(window->first < window->second)) throw ParameterError("eigs: window requires E_lo < E_hi");
        lo = window->first;
        hi = window->second;
    }
    const long first = count_one(h, lo - pad);
    const std::vector<double> lams = bisect(h, lo - pad, hi + pad);
    const int m = static_cast<int>(lams.size());

    const std::vector<int> pos = fold_positions(n);
    FoldedLU lu(h, pos);
    const double ortol = 1e-6 * std::max(1.0, h.hnorm);
    const double restol = 1e3 * DBL_EPSILON * h.hnorm;
    std::vector<std::vector<double>> cluster;  // folded vectors of the current cluster
    std::vector<double> x(n), energies(m), states(static_cast<size_t>(m) * n);
    const double scale = 1.0 / std::sqrt(p.grid.dx);

    for (int a = 0; a < m; ++a) {
        const double lam = lams[a];
        if (a == 0 || lam - lams[a - 1] > ortol) cluster.clear();
        lu.factor(lam);
        // Deterministic pseudo-random start vector, keyed by the global eigenvalue index.
        std::uint64_t st = mix_seed(0x5eedULL, static_cast<std::uint64_t>(first + a));
        for (int i = 0; i < n; ++i) {
            st = st * 6364136223846793005ULL + 1442695040888963407ULL;
            x[i] = static_cast<double>(st >> 11) * 0x1.0p-53 - 0.5;
        }
        normalize(x);
        bool converged = false;
        double mu = lam;
        for (int it = 0; it < 10 && !converged; ++it) {
            lu.solve(x);
            for (const auto& c : cluster) {
                const double d = dot(x, c);
                for (int i = 0; i < n; ++i) x[i] -= d * c[i];
            }
            normalize(x);
            mu = rayleigh(h, pos, x);
            converged = it >= 1 && residual(h, pos, x, mu) <= restol;
        }
        if (!converged) throw NumericalError("eigs: inverse iteration did not converge");
        cluster.push_back(x);
        // Sign convention: largest-magnitude component (lowest site on ties) positive.
        int smax_site = 0;
        for (int s = 1; s < n; ++s)
            if (std::abs(x[pos[s]]) > std::abs(x[pos[smax_site]])) smax_site = s;
        const double sgn = x[pos[smax_site]] < 0.0 ? -scale : scale;
        energies[a] = mu;
        double* out = states.data() + static_cast<size_t>(a) * n;
        for (int s = 0; s < n; ++s) out[s] = sgn * x[pos[s]];
    }

    std::vector<int> order;
    for (int a = 0; a < m; ++a)
        if (!window || (energies[a] >= lo && energies[a] <= hi)) order.push_back(a);
    std::stable_sort(order.begin(), order.end(), [&](int u, int v) { return energies[u] < energies[v]; });
    EigenSolution sol;
    sol.grid = p.grid;
    sol.window = window;
    sol.energies.reserve(order.size());
    sol.states.resize(order.size() * static_cast<size_t>(n));
    for (size_t b = 0; b < order.size(); ++b) {
        sol.energies.push_back(energies[order[b]]);
        std::copy_n(states.data() + static_cast<size_t>(order[b]) * n, n, sol.states.data() + b * n);
    }
    return sol;
}

std::vector<double> momentum_overlap(const EigenSolution& sol, double k0) {
    const Grid& g = sol.grid;
    const int j = g.k_index(k0);
    const int n = g.N;
    std::vector<std::complex<double>> phase(n);
    for (int s = 0; s < n; ++s) {
        const double arg = -2.0 * std::numbers::pi * static_cast<double>((static_cast<long>(j) * s) % n) / n;
        phase[s] = {std::cos(arg), std::sin(arg)};
    }
    std::vector<double> w(sol.size());
    for (int a = 0; a < sol.size(); ++a) {
        const auto phi = sol.state(a);
        std::complex<double> z = 0.0;
        for (int s = 0; s < n; ++s) z += phase[s] * phi[s];
        w[a] = g.dx * g.dx / g.L * std::norm(z);
    }
    return w;
}

}  // namespace llspec
