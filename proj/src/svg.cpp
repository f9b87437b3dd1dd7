#include "llspec/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "llspec/io.hpp"

namespace llspec {
namespace {

constexpr double kW = 640.0, kH = 480.0, kPad = 40.0;
const char* kColors[] = {"#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd"};

std::string color_ramp(double t) {
    // Blue (negative) - white - red (positive), t in [-1, 1].
    t = std::clamp(t, -1.0, 1.0);
    const int a = static_cast<int>(std::lround(255.0 * (1.0 - std::abs(t))));
    char buf[16];
    if (t >= 0)
        std::snprintf(buf, sizeof buf, "#ff%02x%02x", a, a);
    else
        std::snprintf(buf, sizeof buf, "#%02x%02xff", a, a);
    return buf;
}

}  // namespace

std::string svg_heatmap(const PhaseGrid& g, const std::vector<const ContourSet*>& overlays, double k_max) {
    const Grid& gr = g.grid;
    const int n = gr.N;
    int r0 = 0, r1 = n;
    for (int r = 0; r < n; ++r)
        if (std::abs(gr.k_row(r)) <= k_max) {
            r0 = r;
            break;
        }
    for (int r = n - 1; r >= 0; --r)
        if (std::abs(gr.k_row(r)) <= k_max) {
            r1 = r + 1;
            break;
        }
    const int bx = std::max(1, (n + 199) / 200), by = std::max(1, (r1 - r0 + 199) / 200);
    const int cols = (n + bx - 1) / bx, rows = (r1 - r0 + by - 1) / by;
    std::vector<double> blk(static_cast<size_t>(cols) * rows, 0.0);
    double vmax = 0.0;
    for (int j = 0; j < rows; ++j)
        for (int i = 0; i < cols; ++i) {
            double s = 0.0;
            int c = 0;
            for (int r = r0 + j * by; r < std::min(r1, r0 + (j + 1) * by); ++r)
                for (int x = i * bx; x < std::min(n, (i + 1) * bx); ++x, ++c) s += g.at(x, r);
            blk[static_cast<size_t>(j) * cols + i] = s / c;
            vmax = std::max(vmax, std::abs(s / c));
        }
    const double kl = gr.k_row(r0), kh = gr.k_row(r1 - 1);
    auto px = [&](double x) { return kPad + (kW - 2 * kPad) * x / gr.L; };
    auto py = [&](double k) { return kH - kPad - (kH - 2 * kPad) * (k - kl) / std::max(kh - kl, 1e-300); };
    const double cw = (kW - 2 * kPad) / cols, ch = (kH - 2 * kPad) / rows;

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
    for (int j = 0; j < rows; ++j)
        for (int i = 0; i < cols; ++i) {
            const double v = blk[static_cast<size_t>(j) * cols + i];
            os << "<rect x=\"" << kPad + i * cw << "\" y=\"" << kH - kPad - (j + 1) * ch << "\" width=\"" << cw + 0.05
               << "\" height=\"" << ch + 0.05 << "\" fill=\"" << color_ramp(vmax > 0 ? v / vmax : 0.0) << "\"/>\n";
        }
    for (size_t c = 0; c < overlays.size(); ++c)
        for (const auto& line : overlays[c]->lines) {
            os << "<polyline fill=\"none\" stroke-width=\"1\" stroke=\"" << kColors[(c + 1) % 5] << "\" points=\"";
            for (const auto& [x, k] : line.points) {
                const double xw = x - gr.L * std::floor(x / gr.L);
                if (k < kl || k > kh) continue;
                os << px(xw) << ',' << py(k) << ' ';
            }
            os << "\"/>\n";
        }
    os << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 8 << "\" font-size=\"12\">x</text>\n";
    os << "<text x=\"8\" y=\"" << kH / 2 << "\" font-size=\"12\">k</text>\n";
    os << "</svg>\n";
    return os.str();
}

std::string svg_curves(const std::vector<const SpectralCurve*>& curves) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
    if (curves.empty()) {
        os << "</svg>\n";
        return os.str();
    }
    const BinSpec& b = curves[0]->hist.bins;
    double amax = 0.0;
    for (const auto* c : curves)
        for (double d : c->hist.density) amax = std::max(amax, d);
    if (amax <= 0.0) amax = 1.0;
    auto px = [&](double e) { return kPad + (kW - 2 * kPad) * (e - b.lo) / (b.hi() - b.lo); };
    auto py = [&](double a) { return kH - kPad - (kH - 2 * kPad) * a / amax; };
    os << "<rect x=\"" << kPad << "\" y=\"" << kPad << "\" width=\"" << kW - 2 * kPad << "\" height=\"" << kH - 2 * kPad
       << "\" fill=\"none\" stroke=\"#888\"/>\n";
    for (size_t c = 0; c < curves.size(); ++c) {
        const Histogram& h = curves[c]->hist;
        os << "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\"" << kColors[c % 5] << "\" points=\"";
        for (int i = 0; i < h.bins.count; ++i) os << px(h.bins.center(i)) << ',' << py(h.density[i]) << ' ';
        os << "\"/>\n";
        os << "<text x=\"" << kW - kPad - 80 << "\" y=\"" << kPad + 16 * (c + 1) << "\" font-size=\"12\" fill=\""
           << kColors[c % 5] << "\">" << to_string(curves[c]->method) << "</text>\n";
    }
    os << "<text x=\"" << kPad << "\" y=\"" << kH - 8 << "\" font-size=\"12\">E from " << fmt(b.lo) << " to "
       << fmt(b.hi()) << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace llspec
