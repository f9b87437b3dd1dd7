#include "llspec/histogram.hpp"

#include <cmath>
#include <limits>

#include "llspec/errors.hpp"

namespace llspec {

BinSpec BinSpec::make(double lo, double width, int count) {
    if (!std::isfinite(lo)) throw ParameterError("bins: lower edge must be finite");
    if (!(width > 0.0) || !std::isfinite(width)) throw ParameterError("bins: width must be positive");
    if (count < 1) throw ParameterError("bins: need at least one bin");
    return BinSpec{lo, width, count};
}

BinSpec BinSpec::covering(double lo, double hi, double width) {
    if (!(hi > lo)) throw ParameterError("bins: empty energy range");
    const double n = std::ceil((hi - lo) / width - 1e-9);
    if (n > 5e7) throw ParameterError("bins: too many bins");
    return make(lo, width, std::max(1, static_cast<int>(n)));
}

__int128 ExactSum::to_fixed(double x) {
    if (!std::isfinite(x) || std::abs(x) > 1e18) throw NumericalError("accumulator overflow");
    return static_cast<__int128>(std::ldexp(x, kShift));
}

double Histogram::integral() const {
    double s = 0.0;
    for (double d : density) s += d * bins.width;
    return s;
}

double Histogram::mean() const {
    double s = 0.0;
    double m = 0.0;
    for (int i = 0; i < bins.count; ++i) {
        s += density[i] * bins.width * bins.center(i);
        m += density[i] * bins.width;
    }
    return m != 0.0 ? s / m : std::numeric_limits<double>::quiet_NaN();
}

HistogramAccumulator::HistogramAccumulator(const BinSpec& bins) : bins_(bins), mass_(bins.count) {}

void HistogramAccumulator::add(double value, double weight) { add_bin_mass(bins_.index(value), weight); }

void HistogramAccumulator::add_bin_mass(int bin, double mass) {
    if (bin < 0)
        below_.add(mass);
    else if (bin >= bins_.count)
        above_.add(mass);
    else
        mass_[bin].add(mass);
}

void HistogramAccumulator::merge(const HistogramAccumulator& o) {
    if (!(o.bins_ == bins_)) throw ParameterError("histogram merge: bin mismatch");
    for (int i = 0; i < bins_.count; ++i) mass_[i].merge(o.mass_[i]);
    below_.merge(o.below_);
    above_.merge(o.above_);
    samples_ += o.samples_;
}

double HistogramAccumulator::total() const {
    ExactSum t = below_;
    t.merge(above_);
    for (const auto& m : mass_) t.merge(m);
    return t.value();
}

Histogram HistogramAccumulator::finish() const { return finish(total()); }

Histogram HistogramAccumulator::finish(double norm) const {
    Histogram h;
    h.bins = bins_;
    h.samples = samples_;
    h.density.assign(bins_.count, 0.0);
    if (norm == 0.0) return h;
    for (int i = 0; i < bins_.count; ++i) h.density[i] = mass_[i].value() / (norm * bins_.width);
    h.below = below_.value() / norm;
    h.above = above_.value() / norm;
    return h;
}

double l1_distance(const Histogram& a, const Histogram& b) {
    if (!(a.bins == b.bins)) throw ParameterError("l1_distance: bin mismatch");
    double s = std::abs(a.below - b.below) + std::abs(a.above - b.above);
    for (int i = 0; i < a.bins.count; ++i) s += std::abs(a.density[i] - b.density[i]) * a.bins.width;
    return s;
}

}  // namespace llspec
