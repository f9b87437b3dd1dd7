#include "llspec/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "llspec/errors.hpp"
#include "llspec/fft.hpp"

namespace llspec {

std::string to_string(DisorderKind kind) {
    switch (kind) {
        case DisorderKind::SpeckleGauss: return "speckle-gauss";
        case DisorderKind::SpeckleSinc: return "speckle-sinc";
        case DisorderKind::GaussGauss: return "gauss-gauss";
    }
    return "unknown";
}

DisorderKind parse_kind(const std::string& name) {
    if (name == "speckle-gauss" || name == "speckle") return DisorderKind::SpeckleGauss;
    if (name == "speckle-sinc" || name == "sinc") return DisorderKind::SpeckleSinc;
    if (name == "gauss-gauss" || name == "gauss") return DisorderKind::GaussGauss;
    throw ParameterError("unknown disorder kind '" + name + "' (speckle-gauss, speckle-sinc, gauss-gauss)");
}

Potential Potential::from_samples(const Grid& grid, std::vector<double> V, Disorder d, std::uint64_t seed) {
    if (static_cast<int>(V.size()) != grid.N) throw ParameterError("potential: sample count != grid N");
    for (double v : V)
        if (!std::isfinite(v)) throw ParameterError("potential: non-finite sample");
    return Potential{grid, std::move(V), d, seed};
}

double Potential::min() const { return *std::min_element(V.begin(), V.end()); }
double Potential::max() const { return *std::max_element(V.begin(), V.end()); }
double Potential::mean() const { return std::accumulate(V.begin(), V.end(), 0.0) / V.size(); }

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + (index + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<double> fourier_filter(const Grid& grid, DisorderKind kind) {
    std::vector<double> F(grid.N);
    for (int f = 0; f < grid.N; ++f) {
        const double k = grid.k_fft(f);
        switch (kind) {
            case DisorderKind::SpeckleGauss: F[f] = std::exp(-0.5 * k * k); break;
            case DisorderKind::GaussGauss: F[f] = std::exp(-0.25 * k * k); break;
            case DisorderKind::SpeckleSinc: {
                const double a = std::abs(k);
                if (std::abs(a - 1.0) <= 1e-9)
                    F[f] = std::sqrt(0.5);
                else
                    F[f] = a < 1.0 ? 1.0 : 0.0;
                break;
            }
        }
    }
    return F;
}

std::vector<std::complex<double>> white_noise(const Grid& grid, DisorderKind kind, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<std::complex<double>> xi(grid.N);
    if (is_speckle(kind)) {
        const double s = std::sqrt(0.5);
        for (auto& z : xi) {
            const double re = normal(rng);
            const double im = normal(rng);
            z = {s * re, s * im};
        }
    } else {
        for (auto& z : xi) z = {normal(rng), 0.0};
    }
    return xi;
}

Potential gen_potential(const Grid& grid, const Disorder& disorder, std::uint64_t seed) {
    if (!(disorder.V0 > 0.0) || !std::isfinite(disorder.V0)) throw ParameterError("disorder: V0 must be positive");
    const int N = grid.N;
    const std::vector<double> F = fourier_filter(grid, disorder.kind);
    auto a = white_noise(grid, disorder.kind, seed);
    fft::forward(a);
    for (int f = 0; f < N; ++f) a[f] *= F[f] / N;
    fft::backward(a);

    double s = 0.0;
    for (double v : F) s += v * v;
    s /= N;  // ensemble E|a_n|^2

    std::vector<double> V(N);
    if (is_speckle(disorder.kind)) {
        for (int n = 0; n < N; ++n) V[n] = disorder.V0 * std::norm(a[n]) / s;
    } else {
        const double scale = disorder.V0 / std::sqrt(s);
        for (int n = 0; n < N; ++n) V[n] = scale * a[n].real();
    }
    return Potential{grid, std::move(V), disorder, seed};
}

StatsAccumulator::StatsAccumulator(const Grid& grid, const BinSpec& bins)
    : grid_(grid), hist_(bins), corr_(grid.N / 2 + 1) {}

void StatsAccumulator::add(const Potential& p) {
    if (!(p.grid == grid_)) throw ParameterError("estimate_stats: mixed grids");
    if (kind_ && *kind_ != p.disorder.kind) throw ParameterError("estimate_stats: mixed disorder kinds");
    kind_ = p.disorder.kind;
    const int N = grid_.N;
    fft::cvec a(N);
    for (int n = 0; n < N; ++n) {
        a[n] = p.V[n];
        hist_.add(p.V[n]);
        sum_.add(p.V[n]);
        sum_sq_.add(p.V[n] * p.V[n]);
    }
    hist_.add_count(N);
    fft::forward(a);
    for (auto& z : a) z = std::norm(z);
    fft::backward(a);
    // sum_n V(n) V(n+m) = backward(|V^|^2)[m] / N; average over n adds another 1/N.
    const double scale = 1.0 / (static_cast<double>(N) * N);
    for (int m = 0; m <= N / 2; ++m) corr_[m].add(a[m].real() * scale);
    ++count_;
}

void StatsAccumulator::merge(const StatsAccumulator& o) {
    if (!(o.grid_ == grid_)) throw ParameterError("estimate_stats: mixed grids");
    if (kind_ && o.kind_ && *kind_ != *o.kind_) throw ParameterError("estimate_stats: mixed disorder kinds");
    if (!kind_) kind_ = o.kind_;
    hist_.merge(o.hist_);
    for (size_t m = 0; m < corr_.size(); ++m) corr_[m].merge(o.corr_[m]);
    sum_.merge(o.sum_);
    sum_sq_.merge(o.sum_sq_);
    count_ += o.count_;
}

DisorderStats StatsAccumulator::finish() const {
    DisorderStats st;
    st.histogram = hist_.finish();
    st.realizations = count_;
    if (count_ == 0) return st;
    const double n = static_cast<double>(count_) * grid_.N;
    st.mean = sum_.value() / n;
    st.variance = sum_sq_.value() / n - st.mean * st.mean;
    const int M = grid_.N / 2 + 1;
    st.x.resize(M);
    st.g.resize(M);
    for (int m = 0; m < M; ++m) {
        st.x[m] = grid_.x(m);
        st.g[m] = corr_[m].value() / count_ - st.mean * st.mean;
    }
    return st;
}

BinSpec default_value_bins(const Disorder& d) {
    if (is_speckle(d.kind)) return BinSpec::make(0.0, d.V0 / 50.0, 750);
    return BinSpec::make(-6.0 * d.V0, d.V0 / 50.0, 600);
}

DisorderStats estimate_stats(const std::vector<Potential>& ensemble, std::optional<BinSpec> bins) {
    if (ensemble.empty()) throw ParameterError("estimate_stats: empty ensemble");
    if (!bins) {
        double lo = ensemble[0].min();
        double hi = ensemble[0].max();
        for (const auto& p : ensemble) {
            lo = std::min(lo, p.min());
            hi = std::max(hi, p.max());
        }
        if (hi == lo)
            bins = BinSpec::make(lo - 0.5, 1.0, 1);
        else
            bins = BinSpec::make(lo, (hi - lo) / 100.0 * (1.0 + 1e-12), 100);
    }
    StatsAccumulator acc(ensemble[0].grid, *bins);
    for (const auto& p : ensemble) acc.add(p);
    return acc.finish();
}

double ks_exponential(std::vector<double> samples, double V0) {
    if (samples.empty()) throw ParameterError("ks_exponential: no samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        const double cdf = samples[i] <= 0.0 ? 0.0 : -std::expm1(-samples[i] / V0);
        d = std::max({d, std::abs((i + 1) / n - cdf), std::abs(cdf - i / n)});
    }
    return d;
}

double ks_critical_1pct(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

}  // namespace llspec
