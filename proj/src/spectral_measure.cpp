#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "llspec/eigensolve.hpp"
#include "llspec/errors.hpp"

namespace llspec {
namespace {

constexpr int K = 8;           // problems processed together
constexpr int kMaxIter = 60;   // QL sweeps per eigenvalue

// Symmetric band (half-bandwidth 2 plus one bulge diagonal) of K problems, lane-major:
// element (p, m), p >= m, lives at a[(4 m + p - m) K + lane].
struct Band {
    int n;
    std::vector<double> a;
    explicit Band(int n_) : n(n_), a((4 * static_cast<size_t>(n_) + 8) * K, 0.0) {}
    double* at(int p, int m) { return &a[(4 * static_cast<size_t>(m) + (p - m)) * K]; }
};

// Similarity rotation of rows/columns r, r+1 by (c, s) in every lane.
void rotate(Band& B, int r, const double* c, const double* s) {
    const int q = r + 1, n = B.n;
    for (int m = std::max(0, r - 2); m < r; ++m) {
        double* x = B.at(r, m);
        double* y = B.at(q, m);
        for (int l = 0; l < K; ++l) {
            const double x0 = x[l], y0 = y[l];
            x[l] = c[l] * x0 + s[l] * y0;
            y[l] = -s[l] * x0 + c[l] * y0;
        }
    }
    for (int m = q + 1; m <= std::min(n - 1, r + 3); ++m) {
        double* x = B.at(m, r);
        double* y = B.at(m, q);
        for (int l = 0; l < K; ++l) {
            const double x0 = x[l], y0 = y[l];
            x[l] = c[l] * x0 + s[l] * y0;
            y[l] = -s[l] * x0 + c[l] * y0;
        }
    }
    if (q + 3 <= n - 1) {
        double* y = B.at(q + 3, q);
        for (int l = 0; l < K; ++l) y[l] = c[l] * y[l];
    }
    double* ar = B.at(r, r);
    double* aq = B.at(q, q);
    double* arq = B.at(q, r);
    for (int l = 0; l < K; ++l) {
        const double cc = c[l] * c[l], ss = s[l] * s[l], cs = c[l] * s[l];
        const double x = ar[l], z = aq[l], y = arq[l];
        ar[l] = cc * x + 2 * cs * y + ss * z;
        aq[l] = ss * x - 2 * cs * y + cc * z;
        arq[l] = cs * (z - x) + (cc - ss) * y;
    }
}

// Givens reduction of the pentadiagonal band to tridiagonal form; the probe vectors
// b[(p nv + v) K + lane] receive the same rotations.
void reduce(Band& B, std::vector<double>& b, int nv) {
    const int n = B.n;
    double c[K], s[K];
    for (int j = 0; j < n - 2; ++j) {
        for (int rr = j + 1, col = j; rr + 1 < n; col = rr, rr += 2) {
            double* x = B.at(rr, col);
            double* y = B.at(rr + 1, col);
            for (int l = 0; l < K; ++l) {
                const double r = std::sqrt(x[l] * x[l] + y[l] * y[l]);
                if (r == 0.0) {
                    c[l] = 1.0;
                    s[l] = 0.0;
                } else {
                    const double ir = 1.0 / r;
                    c[l] = x[l] * ir;
                    s[l] = y[l] * ir;
                }
            }
            rotate(B, rr, c, s);
            for (int l = 0; l < K; ++l) y[l] = 0.0;
            for (int v = 0; v < nv; ++v) {
                double* b0 = &b[(static_cast<size_t>(rr) * nv + v) * K];
                double* b1 = &b[(static_cast<size_t>(rr + 1) * nv + v) * K];
                for (int l = 0; l < K; ++l) {
                    const double u0 = b0[l], u1 = b1[l];
                    b0[l] = c[l] * u0 + s[l] * u1;
                    b1[l] = -s[l] * u0 + c[l] * u1;
                }
            }
        }
    }
}

// Implicit QL on one tridiagonal, advanced one rotation at a time so that K independent
// problems can be interleaved (the rotation chain is latency bound).
struct QLState {
    double* d;
    double* e;
    double* w[2];
    int nv, n, l, m, i, iter;
    double s, c, p, g;
    bool done, failed;

    void start() {
        for (;;) {
            if (l >= n) {
                done = true;
                return;
            }
            int mm;
            for (mm = l; mm < n - 1; ++mm) {
                const double dd = std::abs(d[mm]) + std::abs(d[mm + 1]);
                if (std::abs(e[mm]) <= 0x1.0p-52 * dd) break;
            }
            if (mm == l) {
                ++l;
                iter = 0;
                continue;
            }
            if (++iter > kMaxIter || !std::isfinite(d[l]) || !std::isfinite(e[l])) {
                done = failed = true;
                return;
            }
            double gg = (d[l + 1] - d[l]) / (2.0 * e[l]);
            const double r = std::sqrt(gg * gg + 1.0);
            g = d[mm] - d[l] + e[l] / (gg + std::copysign(r, gg));
            s = c = 1.0;
            p = 0.0;
            m = mm;
            i = mm - 1;
            return;
        }
    }

    // One rotation; returns false once the problem is finished.
    bool step() {
        const double f = s * e[i], b = c * e[i];
        double r = std::sqrt(f * f + g * g);
        e[i + 1] = r;
        if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            start();
            return !done;
        }
        const double ir = 1.0 / r;
        s = f * ir;
        c = g * ir;
        const double gg = d[i + 1] - p;
        r = (d[i] - gg) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = gg + p;
        g = c * r - b;
        for (int v = 0; v < nv; ++v) {
            double* z = w[v];
            const double f2 = z[i + 1];
            z[i + 1] = s * z[i] + c * f2;
            z[i] = c * z[i] - s * f2;
        }
        if (--i < l) {
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
            start();
            return !done;
        }
        return true;
    }
};

void run_group(const Potential* const* group, double k0, int j, std::vector<SpectralMeasure>& out,
               std::vector<bool>& ok, size_t offset, int count) {
    const Grid& grid = group[0]->grid;
    const int n = grid.N;
    const int nv = (2 * j) % n == 0 ? 1 : 2;  // sin(k0 x_n) vanishes identically when k0 in {0, -pi/dx}
    (void)k0;
    std::vector<int> pos(n);
    for (int s = 0; s < n; ++s) pos[s] = s < n / 2 ? 2 * s : 2 * (n - 1 - s) + 1;

    Band B(n);
    const double inv = 1.0 / (grid.dx * grid.dx);
    const double t = -0.5 * inv;
    for (int lane = 0; lane < K; ++lane) {
        const Potential& p = *group[lane < count ? lane : 0];
        for (int s = 0; s < n; ++s) {
            B.at(pos[s], pos[s])[lane] = inv + p.V[s];
            const int a = pos[s], c = pos[(s + 1) % n];
            B.at(std::max(a, c), std::min(a, c))[lane] = t;
        }
    }
    std::vector<double> b(static_cast<size_t>(n) * nv * K);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (int s = 0; s < n; ++s) {
        const long jm = ((static_cast<long>(j) * s) % n + n) % n;
        const double arg = 2.0 * std::numbers::pi * static_cast<double>(jm) / n;
        const double vals[2] = {std::cos(arg) * norm, std::sin(arg) * norm};
        for (int v = 0; v < nv; ++v)
            for (int lane = 0; lane < K; ++lane) b[(static_cast<size_t>(pos[s]) * nv + v) * K + lane] = vals[v];
    }
    reduce(B, b, nv);

    std::vector<double> d(static_cast<size_t>(K) * n), e(static_cast<size_t>(K) * n, 0.0),
        w(static_cast<size_t>(K) * nv * n);
    QLState S[K];
    for (int lane = 0; lane < K; ++lane) {
        double* dl = &d[static_cast<size_t>(lane) * n];
        double* el = &e[static_cast<size_t>(lane) * n];
        for (int p = 0; p < n; ++p) dl[p] = B.at(p, p)[lane];
        for (int p = 0; p + 1 < n; ++p) el[p] = B.at(p + 1, p)[lane];
        QLState& q = S[lane];
        q = {};
        q.d = dl;
        q.e = el;
        q.nv = nv;
        q.n = n;
        for (int v = 0; v < nv; ++v) {
            double* wv = &w[(static_cast<size_t>(lane) * nv + v) * n];
            for (int p = 0; p < n; ++p) wv[p] = b[(static_cast<size_t>(p) * nv + v) * K + lane];
            q.w[v] = wv;
        }
        q.start();
    }
    int active = 0;
    for (const auto& q : S) active += q.done ? 0 : 1;
    while (active > 0) {
        for (auto& q : S) {
            if (q.done) continue;
            if (!q.step()) --active;
        }
    }

    std::vector<int> order(n);
    for (int lane = 0; lane < count; ++lane) {
        const double* dl = &d[static_cast<size_t>(lane) * n];
        bool good = !S[lane].failed;
        for (int p = 0; p < n && good; ++p) good = std::isfinite(dl[p]);
        ok[offset + lane] = good;
        if (!good) continue;
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return dl[x] < dl[y]; });
        SpectralMeasure& m = out[offset + lane];
        m.energies.resize(n);
        m.weights.resize(n);
        for (int a = 0; a < n; ++a) {
            const int p = order[a];
            double wt = 0.0;
            for (int v = 0; v < nv; ++v) {
                const double z = w[(static_cast<size_t>(lane) * nv + v) * n + p];
                wt += z * z;
            }
            m.energies[a] = dl[p];
            m.weights[a] = wt;
        }
    }
}

}  // namespace

std::vector<SpectralMeasure> plane_wave_measures(std::span<const Potential* const> batch, double k0,
                                                 std::vector<bool>* ok) {
    std::vector<SpectralMeasure> out(batch.size());
    if (batch.empty()) return out;
    const Grid& grid = batch[0]->grid;
    for (const Potential* p : batch)
        if (!(p->grid == grid)) throw ParameterError("plane_wave_measures: mixed grids");
    const int j = grid.k_index(k0);
    std::vector<bool> flags(batch.size(), false);
    for (size_t off = 0; off < batch.size(); off += K) {
        const int count = static_cast<int>(std::min<size_t>(K, batch.size() - off));
        run_group(batch.data() + off, k0, j, out, flags, off, count);
    }
    if (ok) {
        *ok = flags;
    } else {
        for (bool f : flags)
            if (!f) throw NumericalError("spectral measure: QL iteration did not converge");
    }
    return out;
}

SpectralMeasure plane_wave_measure(const Potential& p, double k0) {
    const Potential* one[1] = {&p};
    return std::move(plane_wave_measures(std::span<const Potential* const>(one, 1), k0)[0]);
}

}  // namespace llspec
