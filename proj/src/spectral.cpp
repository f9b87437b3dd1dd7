#include "llspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "llspec/errors.hpp"

namespace llspec {

std::string to_string(Method m) {
    switch (m) {
        case Method::EigenRoute: return "eigen";
        case Method::ChebRoute: return "cheb";
        case Method::LLEstimate: return "ll";
        case Method::ClassicalLimit: return "classical";
        case Method::TrappeBaseline: return "trappe";
    }
    return "unknown";
}

BinSpec default_spectral_bins(const Disorder& d, const Grid& grid, double k0) {
    const double v0 = d.V0;
    double lo, hi;
    if (is_speckle(d.kind)) {
        lo = 0.0;
        hi = v0 * std::log(1e6);
    } else {
        lo = -4.9 * v0;
        hi = 4.9 * v0;
    }
    const double kin = grid.lattice_kinetic(k0);
    return BinSpec::covering(lo - v0 + kin, hi + 5.0 * v0 + kin, v0 / 100.0);
}

SpectralCurve curve_from_measure(const SpectralMeasure& m, double k0, const BinSpec& bins) {
    HistogramAccumulator acc(bins);
    for (size_t a = 0; a < m.energies.size(); ++a) acc.add(m.energies[a], m.weights[a]);
    acc.add_count(1);
    SpectralCurve c;
    c.k0 = k0;
    c.method = Method::EigenRoute;
    c.hist = acc.finish(1.0);
    return c;
}

SpectralCurve spectral_eigen(const Potential& p, double k0, const BinSpec& bins) {
    return curve_from_measure(plane_wave_measure(p, k0), k0, bins);
}

ChebScale cheb_scale(const Potential& p) {
    const auto [lo, hi] = spectrum_bounds(p);
    ChebScale s;
    s.center = 0.5 * (lo + hi);
    s.half_width = 0.5 * (hi - lo) / 0.99;
    return s;
}

std::vector<double> jackson_kernel(int order) {
    std::vector<double> g(order);
    const double q = std::numbers::pi / (order + 1);
    const double cot = std::cos(q) / std::sin(q);
    for (int m = 0; m < order; ++m) g[m] = ((order - m + 1) * std::cos(q * m) + std::sin(q * m) * cot) / (order + 1);
    return g;
}

std::vector<double> chebyshev_moments(const Potential& p, double k0, int order, const ChebScale& s) {
    if (order < 2) throw ParameterError("chebyshev_moments: order must be >= 2");
    const Grid& g = p.grid;
    const int n = g.N;
    const int j = g.k_index(k0);
    const int nv = (2 * j) % n == 0 ? 1 : 2;
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    const double ih = 1.0 / s.half_width;
    const int half = order / 2;  // v_0 .. v_half are needed

    std::vector<double> mu(order, 0.0);
    std::vector<double> prev(n), cur(n), next(n), hx(n);
    auto scaled = [&](const std::vector<double>& x, std::vector<double>& y) {
        apply_hamiltonian(p, x, hx);
        for (int i = 0; i < n; ++i) y[i] = (hx[i] - s.center * x[i]) * ih;
    };
    auto dot = [n](const std::vector<double>& a, const std::vector<double>& b) {
        double r = 0.0;
        for (int i = 0; i < n; ++i) r += a[i] * b[i];
        return r;
    };
    for (int v = 0; v < nv; ++v) {
        for (int x = 0; x < n; ++x) {
            const long jm = ((static_cast<long>(j) * x) % n + n) % n;
            const double arg = 2.0 * std::numbers::pi * static_cast<double>(jm) / n;
            prev[x] = (v == 0 ? std::cos(arg) : std::sin(arg)) * norm;
        }
        std::vector<double> m(order, 0.0);
        const double mu0 = dot(prev, prev);
        scaled(prev, cur);  // v_1
        const double mu1 = dot(prev, cur);
        m[0] = mu0;
        if (order > 1) m[1] = mu1;
        // v_k with k = 1: mu_2 = 2<v1,v1> - mu0, mu_1 already known.
        for (int k = 1; k <= half; ++k) {
            if (2 * k < order) m[2 * k] = 2.0 * dot(cur, cur) - mu0;
            if (k == half) break;
            scaled(cur, next);
            for (int i = 0; i < n; ++i) next[i] = 2.0 * next[i] - prev[i];  // v_{k+1}
            if (2 * k + 1 < order) m[2 * k + 1] = 2.0 * dot(next, cur) - mu1;
            std::swap(prev, cur);
            std::swap(cur, next);
        }
        for (int i = 0; i < order; ++i) mu[i] += m[i];
    }
    return mu;
}

SpectralCurve spectral_cheb(const Potential& p, double k0, const BinSpec& bins, int order) {
    if (order < 64) throw ParameterError("spectral_cheb: order must be >= 64");
    const ChebScale s = cheb_scale(p);
    const std::vector<double> mu = chebyshev_moments(p, k0, order, s);
    const std::vector<double> g = jackson_kernel(order);
    std::vector<double> c(order);
    for (int m = 0; m < order; ++m) c[m] = g[m] * mu[m];

    // F(theta) = c_0 theta + 2 sum_m c_m sin(m theta)/m; mass on [x1, x2] = (F(th1) - F(th2))/pi.
    auto F = [&](double theta) {
        double r = c[0] * theta;
        for (int m = 1; m < order; ++m) r += 2.0 * c[m] * std::sin(m * theta) / m;
        return r;
    };
    auto theta_of = [&](double E) { return std::acos(std::clamp((E - s.center) / s.half_width, -1.0, 1.0)); };
    std::vector<double> fe(bins.count + 1);
    for (int i = 0; i <= bins.count; ++i) fe[i] = F(theta_of(bins.edge(i)));

    SpectralCurve curve;
    curve.k0 = k0;
    curve.method = Method::ChebRoute;
    curve.order = order;
    curve.hist.bins = bins;
    curve.hist.samples = 1;
    curve.hist.density.resize(bins.count);
    const double ipi = 1.0 / std::numbers::pi;
    for (int i = 0; i < bins.count; ++i) curve.hist.density[i] = (fe[i] - fe[i + 1]) * ipi / bins.width;
    curve.hist.below = (F(std::numbers::pi) - fe[0]) * ipi;
    curve.hist.above = (fe[bins.count] - F(0.0)) * ipi;
    curve.resolution_warning = s.half_width * std::numbers::pi / order > bins.width;
    return curve;
}

double cheb_l1_bound(const SpectralMeasure& m, const BinSpec& bins, int order, const ChebScale& s) {
    const std::vector<double> g = jackson_kernel(order);
    const double g1 = g[1], g2 = g[2];
    double bound = 0.0;
    for (size_t a = 0; a < m.energies.size(); ++a) {
        const double E = m.energies[a];
        const int i = bins.index(E);
        double d;
        if (i < 0)
            d = bins.lo - E;
        else if (i >= bins.count)
            d = E - bins.hi();
        else
            d = std::min(E - bins.edge(i), bins.edge(i + 1) - E);
        const double x0 = (E - s.center) / s.half_width;
        const double s2 = 0.5 * (1.0 + g2 * (2.0 * x0 * x0 - 1.0)) + (1.0 - 2.0 * g1) * x0 * x0;
        const double dx = d / s.half_width;
        const double leak = dx > 0.0 ? std::min(1.0, s2 / (dx * dx)) : 1.0;
        bound += m.weights[a] * 2.0 * leak;
    }
    return bound;
}

SpectralCurve spectral_ll(const Landscape& l, double k0, const BinSpec& bins) {
    HistogramAccumulator acc(bins);
    const double kin = 0.5 * k0 * k0;
    const double w = 1.0 / static_cast<double>(l.v_u.size());
    for (double v : l.v_u) acc.add(v + kin, w);
    acc.add_count(1);
    SpectralCurve c;
    c.k0 = k0;
    c.method = Method::LLEstimate;
    c.hist = acc.finish(1.0);
    return c;
}

SpectralCurve baseline_classical(const std::vector<Potential>& ensemble, const BinSpec& bins, double k0) {
    if (ensemble.empty()) throw ParameterError("baseline_classical: empty ensemble");
    HistogramAccumulator acc(bins);
    const double kin = 0.5 * k0 * k0;
    for (const auto& p : ensemble) {
        const double w = 1.0 / static_cast<double>(p.V.size());
        for (double v : p.V) acc.add(v + kin, w);
        acc.add_count(1);
    }
    SpectralCurve c;
    c.k0 = k0;
    c.method = Method::ClassicalLimit;
    c.realizations = static_cast<long>(ensemble.size());
    c.hist = acc.finish(static_cast<double>(ensemble.size()));
    return c;
}

double trappe_density(double E, double V0) {
    const double v2 = V0 * V0;
    return std::exp(-E * E / (2.0 * v2)) / (std::sqrt(2.0 * std::numbers::pi) * V0) *
           (1.0 - E * (3.0 * v2 - E * E) / (12.0 * v2 * v2));
}

SpectralCurve baseline_trappe(double V0, const BinSpec& bins) {
    if (!(V0 > 0.0)) throw ParameterError("baseline_trappe: V0 must be positive");
    static const double node = std::sqrt(0.6);
    SpectralCurve c;
    c.method = Method::TrappeBaseline;
    c.hist.bins = bins;
    c.hist.density.resize(bins.count);
    for (int i = 0; i < bins.count; ++i) {
        const double mid = bins.center(i), h = 0.5 * bins.width;
        c.hist.density[i] = (5.0 * trappe_density(mid - node * h, V0) + 8.0 * trappe_density(mid, V0) +
                             5.0 * trappe_density(mid + node * h, V0)) /
                            18.0;
    }
    return c;
}

}  // namespace llspec
