#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace llspec {

// Uniform bins [lo + i*width, lo + (i+1)*width), i = 0..count-1.
struct BinSpec {
    double lo = 0.0;
    double width = 1.0;
    int count = 1;

    // Throws ParameterError on width <= 0 or count < 1.
    static BinSpec make(double lo, double width, int count);
    // Covers [lo, hi] with bins of roughly the requested width (count rounded up).
    static BinSpec covering(double lo, double hi, double width);

    double hi() const { return lo + count * width; }
    double edge(int i) const { return lo + i * width; }
    double center(int i) const { return lo + (i + 0.5) * width; }
    // -1 below the range, count above it.
    int index(double e) const {
        const double f = std::floor((e - lo) / width);
        if (f < 0.0) return -1;
        if (f >= count) return count;
        return static_cast<int>(f);
    }
    bool operator==(const BinSpec& o) const { return lo == o.lo && width == o.width && count == o.count; }
};

// Fixed-point accumulator (units of 2^-64). Addition is exact, so sums do not depend on
// the order or grouping of contributions; used for bit-stable parallel merges.
class ExactSum {
public:
    void add(double x) { v_ += to_fixed(x); }
    void merge(const ExactSum& o) { v_ += o.v_; }
    double value() const { return std::ldexp(static_cast<double>(v_), -kShift); }

private:
    static constexpr int kShift = 64;
    static __int128 to_fixed(double x);
    __int128 v_ = 0;
};

// Normalized binned density. mass(i) = density[i]*width; below/above hold the
// fractions of total mass outside the bins, so sum(mass) + below + above = 1.
struct Histogram {
    BinSpec bins;
    std::vector<double> density;
    double below = 0.0;
    double above = 0.0;
    double samples = 0.0;

    double integral() const;
    double mean() const;  // first moment from bin centers (in-range mass only)
};

// Weighted binning with exact merge.
class HistogramAccumulator {
public:
    explicit HistogramAccumulator(const BinSpec& bins);
    void add(double value, double weight = 1.0);
    void add_bin_mass(int bin, double mass);  // bin in [-1, count]
    void merge(const HistogramAccumulator& o);
    void add_count(double n) { samples_ += n; }
    double total() const;
    // Densities normalized by `norm` (default: total accumulated weight).
    Histogram finish() const;
    Histogram finish(double norm) const;
    const BinSpec& bins() const { return bins_; }

private:
    BinSpec bins_;
    std::vector<ExactSum> mass_;
    ExactSum below_, above_;
    double samples_ = 0.0;
};

// L1 distance sum_i |a_i - b_i| * width, including the out-of-range masses.
double l1_distance(const Histogram& a, const Histogram& b);

}  // namespace llspec
