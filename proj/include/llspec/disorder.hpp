#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "llspec/grid.hpp"
#include "llspec/histogram.hpp"

namespace llspec {

enum class DisorderKind { SpeckleGauss, SpeckleSinc, GaussGauss };

// "speckle-gauss", "speckle-sinc", "gauss-gauss".
std::string to_string(DisorderKind kind);
DisorderKind parse_kind(const std::string& name);
inline bool is_speckle(DisorderKind k) { return k != DisorderKind::GaussGauss; }

struct Disorder {
    DisorderKind kind = DisorderKind::SpeckleGauss;
    double V0 = 1.0;  // mean (speckle) or standard deviation (GaussGauss); equals eta
};

struct Potential {
    Grid grid;
    std::vector<double> V;
    Disorder disorder;
    std::uint64_t seed = 0;

    // Wraps explicit samples (kind defaults to SpeckleGauss with V0 = mean |V| or 1).
    static Potential from_samples(const Grid& grid, std::vector<double> V, Disorder d = {}, std::uint64_t seed = 0);
    double min() const;
    double max() const;
    double mean() const;
};

// splitmix64 finalizer applied to base + golden-ratio increments: seed_i = mix(base, i).
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index);

// Fourier amplitude filter per FFT bin (k = grid.k_fft(f)):
//   SpeckleGauss exp(-k^2/2), SpeckleSinc top-hat |k| <= 1 (power 1/2 on |k| = 1),
//   GaussGauss exp(-k^2/4).
std::vector<double> fourier_filter(const Grid& grid, DisorderKind kind);

// White field consumed by gen_potential: std::mt19937_64(seed) feeding
// std::normal_distribution<double>(0, 1). Speckle kinds draw (re, im) pairs per site and
// scale them by 1/sqrt(2); GaussGauss draws one real value per site.
std::vector<std::complex<double>> white_noise(const Grid& grid, DisorderKind kind, std::uint64_t seed);

// Filters the white field in Fourier space (circular convolution) and normalizes with the
// analytic ensemble variance (1/N) sum_j F_j^2, so that mean V = V0 (speckle) or
// Var V = V0^2 (GaussGauss) hold on average, not per realization.
Potential gen_potential(const Grid& grid, const Disorder& disorder, std::uint64_t seed);

struct DisorderStats {
    Histogram histogram;
    std::vector<double> x;  // m*dx, m = 0..N/2
    std::vector<double> g;  // mean(V(x')V(x'+x)) - mean(V)^2
    double mean = 0.0;
    double variance = 0.0;
    long realizations = 0;
};

// Ensemble accumulator; merges are exact so results do not depend on grouping.
class StatsAccumulator {
public:
    StatsAccumulator(const Grid& grid, const BinSpec& bins);
    void add(const Potential& p);
    void merge(const StatsAccumulator& o);
    DisorderStats finish() const;

private:
    Grid grid_;
    std::optional<DisorderKind> kind_;
    HistogramAccumulator hist_;
    std::vector<ExactSum> corr_;
    ExactSum sum_, sum_sq_;
    long count_ = 0;
};

// Default value bins for a kind: speckle [0, 15 V0], GaussGauss [-6 V0, 6 V0], width V0/50.
BinSpec default_value_bins(const Disorder& d);

// Pooled histogram and circular autocovariance. Throws ParameterError on mixed grids or
// kinds. Without bins: 100 bins over the data range, or one unit bin centered on a constant.
DisorderStats estimate_stats(const std::vector<Potential>& ensemble, std::optional<BinSpec> bins = std::nullopt);

// Kolmogorov-Smirnov statistic of samples against the CDF 1 - exp(-V/V0).
double ks_exponential(std::vector<double> samples, double V0);
// Asymptotic two-sided 1% critical value 1.6276/sqrt(n).
double ks_critical_1pct(std::size_t n);

}  // namespace llspec
