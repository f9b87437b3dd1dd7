#include "llspec/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "llspec/errors.hpp"
#include "llspec/harness.hpp"
#include "llspec/io.hpp"

namespace llspec {
namespace {

struct Options {
    std::string kind = "speckle-gauss";
    double eta = 1.0;
    std::optional<double> L, dx;
    std::uint64_t seed = 1;
    long realizations = 1;
    double k0 = 0.0;
    double E = 0.5;
    double alpha = 0.2;
    std::string bins;
    int order = 0;
    double epsilon_frac = 0.1;
    std::string out;
    int threads = 0;
    bool emit_svg = false;
    std::optional<double> emin, emax;
};

// JSON config: an object whose keys are the long flag names (without dashes).
void load_config(const std::string& path, Options& o) {
    std::ifstream f(path);
    if (!f) throw ParameterError("cannot read config '" + path + "'");
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError("config '" + path + "': " + e.what());
    }
    if (!j.is_object()) throw ParameterError("config must be a JSON object");
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "kind") o.kind = v.get<std::string>();
            else if (key == "eta") o.eta = v.get<double>();
            else if (key == "L") o.L = v.get<double>();
            else if (key == "dx") o.dx = v.get<double>();
            else if (key == "seed") o.seed = v.get<std::uint64_t>();
            else if (key == "realizations") o.realizations = v.get<long>();
            else if (key == "k0") o.k0 = v.get<double>();
            else if (key == "E") o.E = v.get<double>();
            else if (key == "alpha") o.alpha = v.get<double>();
            else if (key == "bins") o.bins = v.is_string() ? v.get<std::string>() : fmt(v.get<double>());
            else if (key == "order") o.order = v.get<int>();
            else if (key == "epsilon-frac" || key == "epsilon_frac") o.epsilon_frac = v.get<double>();
            else if (key == "out") o.out = v.get<std::string>();
            else if (key == "threads") o.threads = v.get<int>();
            else if (key == "emit-svg" || key == "emit_svg") o.emit_svg = v.get<bool>();
            else if (key == "emin") o.emin = v.get<double>();
            else if (key == "emax") o.emax = v.get<double>();
            else throw ParameterError("config: unknown key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("config: ") + e.what());
    }
}

// --bins: a width W, or lo:hi:W.
std::optional<BinSpec> parse_bins(const std::string& s) {
    if (s.empty()) return std::nullopt;
    std::vector<double> parts;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ':')) {
        try {
            size_t used = 0;
            parts.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ParameterError("--bins: expected W or lo:hi:W, got '" + s + "'");
        }
    }
    if (parts.size() == 3) return BinSpec::covering(parts[0], parts[1], parts[2]);
    if (parts.size() != 1) throw ParameterError("--bins: expected W or lo:hi:W");
    return BinSpec{0.0, parts[0], 0};  // width only; range filled in later
}

BinSpec resolve_bins(const Options& o, const BinSpec& def) {
    auto b = parse_bins(o.bins);
    if (!b) return def;
    if (b->count > 0) return *b;
    return BinSpec::covering(def.lo, def.hi(), b->width);
}

void add_common(CLI::App* sc, Options& o) {
    sc->add_option("--kind", o.kind, "disorder kind: speckle-gauss | speckle-sinc | gauss-gauss");
    sc->add_option("--eta", o.eta, "disorder strength V0 (units of E_sigma)");
    sc->add_option("--L", o.L, "system length (units of sigma)");
    sc->add_option("--dx", o.dx, "grid step");
    sc->add_option("--seed", o.seed, "seed (base seed for campaigns)");
    sc->add_option("--out", o.out, "output file (gen/landscape/eigs) or directory (campaigns)");
    sc->add_option("--epsilon-frac", o.epsilon_frac, "landscape shift epsilon as a fraction of V0");
    sc->add_option("--threads", o.threads, "worker threads (default: LLSPEC_THREADS or all cores)");
    sc->add_option("--realizations", o.realizations, "number of realizations");
    sc->add_option("--k0", o.k0, "plane-wave momentum (lattice value 2*pi*j/L)");
    sc->add_option("--E", o.E, "target energy");
    sc->add_option("--alpha", o.alpha, "relative window half-width");
    sc->add_option("--bins", o.bins, "bin width W, or lo:hi:W");
    sc->add_option("--order", o.order, "Chebyshev order (0 disables the Chebyshev route)");
    sc->add_flag("--emit-svg", o.emit_svg, "also write SVG figures");
    sc->add_option("--emin", o.emin, "lower energy of the eigs window");
    sc->add_option("--emax", o.emax, "upper energy of the eigs window");
    sc->add_option("--config", "JSON config file; flags override its values");
}

Potential one_potential(const Options& o, double defL, double defdx) {
    const Grid g = Grid::make(o.L.value_or(defL), o.dx.value_or(defdx));
    return gen_potential(g, Disorder{parse_kind(o.kind), o.eta}, o.seed);
}

void emit(const Options& o, std::ostream& out, const std::string& content) {
    if (o.out.empty())
        out << content;
    else
        write_file(o.out, content);
}

CampaignSpec campaign(const Options& o, Task task, double defL, double defdx) {
    CampaignSpec s;
    s.disorder = Disorder{parse_kind(o.kind), o.eta};
    s.L = o.L.value_or(defL);
    s.dx = o.dx.value_or(defdx);
    s.realizations = o.realizations;
    s.base_seed = o.seed;
    s.task = task;
    s.k0 = o.k0;
    s.E = o.E;
    s.alpha = o.alpha;
    s.order = o.order;
    s.epsilon_frac = o.epsilon_frac;
    s.threads = o.threads;
    if (!(s.disorder.V0 > 0.0)) throw ParameterError("--eta must be positive");
    const Grid g = Grid::make(s.L, s.dx);
    if (task == Task::SpectralCompare) {
        g.k_index(s.k0);
        s.bins = resolve_bins(o, default_spectral_bins(s.disorder, g, s.k0));
    } else if (task == Task::DisorderStats) {
        s.bins = resolve_bins(o, default_value_bins(s.disorder));
    }
    return s;
}

void run_campaign_cmd(const Options& o, Task task, double defL, double defdx, std::ostream& out) {
    const CampaignSpec s = campaign(o, task, defL, defdx);
    const CampaignResult r = run_campaign(s);
    const std::string dir = o.out.empty() ? "." : o.out;
    const auto files = write_campaign(r, dir, o.emit_svg);
    out << "completed " << r.completed << " of " << s.realizations << " realizations (" << r.failed << " failed) in "
        << fmt(r.wall_seconds) << " s on " << r.threads_used << " thread(s)\n";
    if (r.curves.count(Method::EigenRoute)) {
        const auto& ex = r.curves.at(Method::EigenRoute).hist;
        for (const auto& [m, c] : r.curves)
            if (m != Method::EigenRoute) out << "L1(" << to_string(m) << ", eigen) = " << fmt(l1_distance(c.hist, ex)) << '\n';
    }
    for (const auto& f : files) out << "wrote " << dir << '/' << f << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"llspec: disordered 1D spectra, landscapes and phase-space maps"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "expand all help");
    auto* gen = app.add_subcommand("gen", "emit one potential realization (CSV x,V)");
    auto* land = app.add_subcommand("landscape", "emit the landscape u and V_u = 1/u (CSV x,u,Vu)");
    auto* eig = app.add_subcommand("eigs", "emit the spectrum (CSV alpha,E)");
    auto* wig = app.add_subcommand("wigner-map", "averaged Wigner map F_E and H / H1 level sets");
    auto* spec = app.add_subcommand("spectral", "spectral-function comparison campaign");
    auto* stats = app.add_subcommand("stats", "disorder statistics campaign");
    auto* idos = app.add_subcommand("idos", "Weyl-law IDOS comparison campaign");
    for (auto* sc : {gen, land, eig, wig, spec, stats, idos}) add_common(sc, o);

    try {
        // Config values become defaults; explicit flags parsed afterwards override them.
        for (int i = 1; i < argc; ++i) {
            const std::string a = argv[i];
            if (a == "--config" && i + 1 < argc) load_config(argv[i + 1], o);
            else if (a.rfind("--config=", 0) == 0) load_config(a.substr(9), o);
        }
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            app.exit(e, out, err);
            return 0;
        } catch (const CLI::CallForAllHelp& e) {
            app.exit(e, out, err);
            return 0;
        } catch (const CLI::ParseError& e) {
            app.exit(e, out, err);
            return 2;
        }

        if (gen->parsed()) {
            const Potential p = one_potential(o, 300.0, 0.05);
            emit(o, out, [&] {
                std::ostringstream os;
                write_potential_csv(os, p);
                return os.str();
            }());
        } else if (land->parsed()) {
            const Potential p = one_potential(o, 300.0, 0.05);
            const Landscape l = solve_landscape(p, o.epsilon_frac);
            std::ostringstream os;
            write_landscape_csv(os, p, l);
            emit(o, out, os.str());
        } else if (eig->parsed()) {
            const Potential p = one_potential(o, 300.0, 0.05);
            std::optional<Window> w;
            if (o.emin || o.emax) {
                const Window b = spectrum_bounds(p);
                w = Window{o.emin.value_or(b.first - 1.0), o.emax.value_or(b.second + 1.0)};
            }
            const EigenSolution sol = eigs(p, w);
            std::ostringstream os;
            write_energies_csv(os, sol,
                               {{"kind", o.kind}, {"eta", fmt(o.eta)}, {"L", fmt(p.grid.L)}, {"dx", fmt(p.grid.dx)},
                                {"seed", std::to_string(o.seed)}});
            emit(o, out, os.str());
        } else if (wig->parsed()) {
            run_campaign_cmd(o, Task::WignerMap, 200.0, 0.2, out);
        } else if (spec->parsed()) {
            run_campaign_cmd(o, Task::SpectralCompare, 300.0, 0.05, out);
        } else if (stats->parsed()) {
            run_campaign_cmd(o, Task::DisorderStats, 300.0, 0.05, out);
        } else if (idos->parsed()) {
            run_campaign_cmd(o, Task::IdosCompare, 300.0, 0.05, out);
        }
        return 0;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace llspec
