#include "llspec/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "llspec/errors.hpp"

namespace llspec {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_meta(std::ostream& os, const Meta& meta) {
    for (const auto& [k, v] : meta) os << '#' << k << '=' << v << '\n';
}

namespace {

Meta potential_meta(const Potential& p) {
    return {{"kind", to_string(p.disorder.kind)},
            {"V0", fmt(p.disorder.V0)},
            {"L", fmt(p.grid.L)},
            {"dx", fmt(p.grid.dx)},
            {"seed", std::to_string(p.seed)}};
}

}  // namespace

void write_potential_csv(std::ostream& os, const Potential& p) {
    write_meta(os, potential_meta(p));
    os << "x,V\n";
    for (int n = 0; n < p.grid.N; ++n) os << fmt(p.grid.x(n)) << ',' << fmt(p.V[n]) << '\n';
}

void write_landscape_csv(std::ostream& os, const Potential& p, const Landscape& l) {
    Meta m = potential_meta(p);
    m.push_back({"eta", fmt(p.disorder.V0)});
    m.push_back({"epsilon", fmt(l.epsilon)});
    m.push_back({"shift", fmt(l.shift)});
    m.push_back({"E0", fmt(l.ground_energy_used)});
    write_meta(os, m);
    os << "x,u,Vu\n";
    for (int n = 0; n < l.grid.N; ++n) os << fmt(l.grid.x(n)) << ',' << fmt(l.u[n]) << ',' << fmt(l.v_u[n]) << '\n';
}

void write_energies_csv(std::ostream& os, const EigenSolution& sol, const Meta& meta) {
    write_meta(os, meta);
    os << "alpha,E\n";
    for (int a = 0; a < sol.size(); ++a) os << a << ',' << fmt(sol.energies[a]) << '\n';
}

void write_histogram_csv(std::ostream& os, const Histogram& h, const Meta& meta) {
    write_meta(os, meta);
    os << "#below=" << fmt(h.below) << "\n#above=" << fmt(h.above) << '\n';
    os << "E,density\n";
    for (int i = 0; i < h.bins.count; ++i) os << fmt(h.bins.center(i)) << ',' << fmt(h.density[i]) << '\n';
}

void write_correlation_csv(std::ostream& os, const DisorderStats& st, const Meta& meta) {
    write_meta(os, meta);
    os << "#mean=" << fmt(st.mean) << "\n#variance=" << fmt(st.variance) << '\n';
    os << "x,g\n";
    for (size_t m = 0; m < st.x.size(); ++m) os << fmt(st.x[m]) << ',' << fmt(st.g[m]) << '\n';
}

void write_curve_csv(std::ostream& os, const SpectralCurve& c, const Meta& meta) {
    write_meta(os, meta);
    os << "#method=" << to_string(c.method) << "\n#k0=" << fmt(c.k0) << "\n#realizations=" << c.realizations << '\n';
    if (c.method == Method::ChebRoute)
        os << "#order=" << c.order << "\n#resolution_warning=" << (c.resolution_warning ? 1 : 0) << '\n';
    os << "#below=" << fmt(c.hist.below) << "\n#above=" << fmt(c.hist.above) << '\n';
    os << "E,A\n";
    const Histogram& h = c.hist;
    for (int i = 0; i < h.bins.count; ++i) os << fmt(h.bins.center(i)) << ',' << fmt(h.density[i]) << '\n';
}

void write_error_curve_csv(std::ostream& os, const SpectralCurve& exact, const SpectralCurve& est, const Meta& meta) {
    if (!(exact.hist.bins == est.hist.bins)) throw ParameterError("error curve: bin mismatch");
    write_meta(os, meta);
    os << "#exact=" << to_string(exact.method) << "\n#estimate=" << to_string(est.method) << '\n';
    os << "E,A_exact,A_est,diff\n";
    const BinSpec& b = exact.hist.bins;
    for (int i = 0; i < b.count; ++i) {
        const double a = exact.hist.density[i], e = est.hist.density[i];
        os << fmt(b.center(i)) << ',' << fmt(a) << ',' << fmt(e) << ',' << fmt(e - a) << '\n';
    }
}

void write_phase_grid_csv(std::ostream& os, const PhaseGrid& g, const Meta& meta) {
    write_meta(os, meta);
    os << "#rows=k_j (j=-N/2..N/2-1)\n#cols=x_n (n=0..N-1)\n";
    const int n = g.N();
    for (int r = 0; r < n; ++r) {
        for (int x = 0; x < n; ++x) {
            if (x) os << ',';
            os << fmt(g.at(x, r));
        }
        os << '\n';
    }
}

void write_contours_csv(std::ostream& os, const ContourSet& c, const Meta& meta) {
    write_meta(os, meta);
    os << "#level=" << fmt(c.level) << '\n';
    os << "polyline_id,x,k\n";
    for (size_t i = 0; i < c.lines.size(); ++i)
        for (const auto& [x, k] : c.lines[i].points) os << i << ',' << fmt(x) << ',' << fmt(k) << '\n';
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParameterError("cannot open '" + path + "' for writing");
    f << content;
    if (!f) throw ParameterError("write failed for '" + path + "'");
}

}  // namespace llspec
