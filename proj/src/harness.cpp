#include "llspec/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "llspec/errors.hpp"
#include "llspec/io.hpp"
#include "llspec/landscape.hpp"
#include "llspec/svg.hpp"

namespace llspec {

std::string to_string(Task t) {
    switch (t) {
        case Task::SpectralCompare: return "spectral-compare";
        case Task::WignerMap: return "wigner-map";
        case Task::DisorderStats: return "disorder-stats";
        case Task::IdosCompare: return "idos-compare";
    }
    return "unknown";
}

Task parse_task(const std::string& name) {
    if (name == "spectral-compare" || name == "spectral") return Task::SpectralCompare;
    if (name == "wigner-map" || name == "wigner") return Task::WignerMap;
    if (name == "disorder-stats" || name == "stats") return Task::DisorderStats;
    if (name == "idos-compare" || name == "idos") return Task::IdosCompare;
    throw ParameterError("unknown task '" + name + "'");
}

void CampaignSpec::validate() const {
    if (!(disorder.V0 > 0.0) || !std::isfinite(disorder.V0)) throw ParameterError("campaign: eta must be positive");
    const Grid g = Grid::make(L, dx);
    if (realizations < 1) throw ParameterError("campaign: realizations must be >= 1");
    if (!std::isfinite(E)) throw ParameterError("campaign: E must be finite");
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ParameterError("campaign: alpha must be >= 0");
    if (order != 0 && order < 64) throw ParameterError("campaign: Chebyshev order must be 0 (off) or >= 64");
    if (!(epsilon_frac > 0.0)) throw ParameterError("campaign: epsilon fraction must be positive");
    if (task == Task::SpectralCompare) g.k_index(k0);
    if (task == Task::IdosCompare && (idos_points < 1 || !(idos_hi >= idos_lo)))
        throw ParameterError("campaign: invalid IDOS energy range");
    if (task == Task::WignerMap && !(alpha * std::abs(E) > 0.0))
        throw ParameterError("campaign: the energy window needs alpha > 0 and E != 0");
    if (threads < 0) throw ParameterError("campaign: threads must be >= 0");
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("LLSPEC_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 1024L));
        throw ParameterError("LLSPEC_THREADS must be a positive integer");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

constexpr long kChunk = 8;

struct Partial {
    std::map<Method, HistogramAccumulator> hist;
    std::optional<StatsAccumulator> stats;
    std::vector<ExactSum> wsum;
    std::vector<ExactSum> idos[5];
    long completed = 0;
    std::vector<long> failed;

    void merge(const Partial& o) {
        for (const auto& [m, h] : o.hist) hist.at(m).merge(h);
        if (stats) stats->merge(*o.stats);
        for (size_t i = 0; i < wsum.size(); ++i) wsum[i].merge(o.wsum[i]);
        for (int k = 0; k < 5; ++k)
            for (size_t i = 0; i < idos[k].size(); ++i) idos[k][i].merge(o.idos[k][i]);
        completed += o.completed;
        failed.insert(failed.end(), o.failed.begin(), o.failed.end());
    }
};

class Runner {
public:
    explicit Runner(const CampaignSpec& s) : spec_(s), grid_(Grid::make(s.L, s.dx)) {
        const long R = s.realizations;
        switch (s.task) {
            case Task::SpectralCompare:
                bins_ = s.bins ? *s.bins : default_spectral_bins(s.disorder, grid_, s.k0);
                break;
            case Task::DisorderStats:
                bins_ = s.bins ? *s.bins : default_value_bins(s.disorder);
                site0_.assign(R, std::numeric_limits<double>::quiet_NaN());
                break;
            case Task::WignerMap:
                capture_h_.assign(R, std::numeric_limits<double>::quiet_NaN());
                capture_h1_.assign(R, std::numeric_limits<double>::quiet_NaN());
                states_.assign(R, 0);
                break;
            case Task::IdosCompare:
                for (int q = 0; q < s.idos_points; ++q) {
                    const double f = s.idos_points == 1 ? 0.0 : static_cast<double>(q) / (s.idos_points - 1);
                    energies_.push_back(s.disorder.V0 * (s.idos_lo + (s.idos_hi - s.idos_lo) * f));
                }
                break;
        }
    }

    Partial make_partial() const {
        Partial p;
        if (spec_.task == Task::SpectralCompare) {
            p.hist.emplace(Method::EigenRoute, HistogramAccumulator(bins_));
            p.hist.emplace(Method::LLEstimate, HistogramAccumulator(bins_));
            p.hist.emplace(Method::ClassicalLimit, HistogramAccumulator(bins_));
            if (spec_.order > 0) p.hist.emplace(Method::ChebRoute, HistogramAccumulator(bins_));
        } else if (spec_.task == Task::DisorderStats) {
            p.stats.emplace(grid_, bins_);
        } else if (spec_.task == Task::WignerMap) {
            p.wsum.resize(static_cast<size_t>(grid_.N) * grid_.N);
        } else {
            for (auto& v : p.idos) v.resize(energies_.size());
        }
        return p;
    }

    void run_chunk(long begin, long end, Partial& part) {
        std::vector<Potential> pots;
        for (long i = begin; i < end; ++i)
            pots.push_back(gen_potential(grid_, spec_.disorder, mix_seed(spec_.base_seed, static_cast<std::uint64_t>(i))));
        std::vector<SpectralMeasure> measures;
        std::vector<bool> ok(pots.size(), true);
        if (spec_.task == Task::SpectralCompare) {
            std::vector<const Potential*> ptrs;
            for (const auto& p : pots) ptrs.push_back(&p);
            measures = plane_wave_measures(ptrs, spec_.k0, &ok);
        }
        for (size_t j = 0; j < pots.size(); ++j) {
            const long i = begin + static_cast<long>(j);
            if (!ok[j]) {
                part.failed.push_back(i);
                continue;
            }
            try {
                realization(i, pots[j], spec_.task == Task::SpectralCompare ? &measures[j] : nullptr, part);
                ++part.completed;
            } catch (const NumericalError&) {
                part.failed.push_back(i);
            }
        }
    }

    CampaignResult finish(Partial& total, double seconds, int threads) {
        CampaignResult r;
        r.spec = spec_;
        r.completed = total.completed;
        std::sort(total.failed.begin(), total.failed.end());
        r.failed_indices = total.failed;
        r.failed = static_cast<long>(total.failed.size());
        r.wall_seconds = seconds;
        r.threads_used = threads;
        if (r.failed * 100 > spec_.realizations)
            throw NumericalError("campaign: " + std::to_string(r.failed) + " of " + std::to_string(spec_.realizations) +
                                 " realizations failed (cap 1%)");
        const double norm = static_cast<double>(r.completed);
        for (auto& [m, h] : total.hist) {
            SpectralCurve c;
            c.k0 = spec_.k0;
            c.method = m;
            c.realizations = r.completed;
            c.order = m == Method::ChebRoute ? spec_.order : 0;
            c.hist = h.finish(norm);
            if (m == Method::ChebRoute) c.resolution_warning = cheb_warning_;
            r.curves[m] = c;
        }
        if (spec_.task == Task::SpectralCompare && spec_.trappe && spec_.disorder.kind == DisorderKind::GaussGauss &&
            spec_.k0 == 0.0) {
            SpectralCurve t = baseline_trappe(spec_.disorder.V0, bins_);
            t.realizations = 0;
            r.curves[Method::TrappeBaseline] = t;
        }
        if (total.stats) {
            r.stats = total.stats->finish();
            for (double v : site0_)
                if (!std::isnan(v)) r.site0_values.push_back(v);
        }
        if (spec_.task == Task::IdosCompare) {
            IdosResult id;
            id.energies = energies_;
            std::vector<double>* dst[5] = {&id.exact, &id.weyl_v, &id.weyl_vu, &id.err_v, &id.err_vu};
            for (int k = 0; k < 5; ++k)
                for (const auto& s : total.idos[k]) dst[k]->push_back(s.value() / norm);
            r.idos = std::move(id);
        }
        if (spec_.task == Task::WignerMap) {
            WignerResult w = std::move(wig0_);
            w.F.grid = grid_;
            w.F.values.resize(total.wsum.size());
            double sum = 0.0;
            for (size_t c = 0; c < total.wsum.size(); ++c) {
                w.F.values[c] = total.wsum[c].value() / norm;
                sum += w.F.values[c];
            }
            w.F.normalization = sum * w.F.cell();
            for (long i = 0; i < spec_.realizations; ++i) {
                if (std::isnan(capture_h_[i])) continue;
                w.capture_H.push_back(capture_h_[i]);
                w.capture_H1.push_back(capture_h1_[i]);
                w.window_states.push_back(states_[i]);
            }
            r.wigner = std::move(w);
        }
        return r;
    }

private:
    void realization(long i, const Potential& p, const SpectralMeasure* m, Partial& part) {
        switch (spec_.task) {
            case Task::SpectralCompare: {
                const Landscape l = solve_landscape(p, spec_.epsilon_frac);
                std::optional<SpectralCurve> cheb;
                if (spec_.order > 0) {
                    cheb = spectral_cheb(p, spec_.k0, bins_, spec_.order);
                    if (cheb->resolution_warning) cheb_warning_ = true;
                }
                auto& eig = part.hist.at(Method::EigenRoute);
                for (size_t a = 0; a < m->energies.size(); ++a) eig.add(m->energies[a], m->weights[a]);
                eig.add_count(1);
                const double kin = 0.5 * spec_.k0 * spec_.k0;
                const double w = 1.0 / grid_.N;
                auto& ll = part.hist.at(Method::LLEstimate);
                auto& cl = part.hist.at(Method::ClassicalLimit);
                for (int n = 0; n < grid_.N; ++n) {
                    ll.add(l.v_u[n] + kin, w);
                    cl.add(p.V[n] + kin, w);
                }
                ll.add_count(1);
                cl.add_count(1);
                if (cheb) {
                    auto& ch = part.hist.at(Method::ChebRoute);
                    for (int b = 0; b < bins_.count; ++b) ch.add_bin_mass(b, cheb->hist.density[b] * bins_.width);
                    ch.add_bin_mass(-1, cheb->hist.below);
                    ch.add_bin_mass(bins_.count, cheb->hist.above);
                    ch.add_count(1);
                }
                break;
            }
            case Task::DisorderStats:
                part.stats->add(p);
                site0_[i] = p.V[0];
                break;
            case Task::WignerMap: {
                const Landscape l = solve_landscape(p, spec_.epsilon_frac);
                const double half = spec_.alpha * std::abs(spec_.E);
                const EigenSolution sol = eigs(p, Window{spec_.E - half, spec_.E + half});
                const WignerMap F = average_wigner(sol, spec_.E, spec_.alpha);
                const WeylSymbol H = weyl_symbol(p.V, grid_);
                const WeylSymbol H1 = weyl_symbol(l.v_u, grid_);
                capture_h_[i] = capture_efficiency(F, H, spec_.E, spec_.alpha);
                capture_h1_[i] = capture_efficiency(F, H1, spec_.E, spec_.alpha);
                states_[i] = sol.size();
                for (size_t c = 0; c < F.values.size(); ++c) part.wsum[c].add(F.values[c]);
                if (i == 0) {
                    wig0_.level_H = level_set(H, spec_.E);
                    wig0_.level_H1 = level_set(H1, spec_.E);
                    wig0_.H = H;
                    wig0_.H1 = H1;
                }
                break;
            }
            case Task::IdosCompare: {
                const Landscape l = solve_landscape(p, spec_.epsilon_frac);
                for (size_t q = 0; q < energies_.size(); ++q) {
                    const double E = energies_[q];
                    const double exact = static_cast<double>(eigen_count(p, E));
                    const double wv = idos_weyl(p.V, grid_, E);
                    const double wu = idos_weyl(l.v_u, grid_, E);
                    part.idos[0][q].add(exact);
                    part.idos[1][q].add(wv);
                    part.idos[2][q].add(wu);
                    part.idos[3][q].add(std::abs(wv - exact));
                    part.idos[4][q].add(std::abs(wu - exact));
                }
                break;
            }
        }
    }

    CampaignSpec spec_;
    Grid grid_;
    BinSpec bins_;
    std::vector<double> energies_;
    std::vector<double> site0_, capture_h_, capture_h1_;
    std::vector<int> states_;
    WignerResult wig0_;
    std::atomic<bool> cheb_warning_{false};
};

}  // namespace

CampaignResult run_campaign(const CampaignSpec& spec) {
    spec.validate();
    const auto t0 = std::chrono::steady_clock::now();
    Runner runner(spec);
    const long chunks = (spec.realizations + kChunk - 1) / kChunk;
    const int threads = static_cast<int>(std::min<long>(resolve_threads(spec.threads), chunks));

    Partial total = runner.make_partial();
    std::atomic<long> next{0};
    std::mutex merge_mutex;
    std::exception_ptr error;
    auto worker = [&] {
        try {
            Partial part = runner.make_partial();
            for (long c; (c = next.fetch_add(1)) < chunks;)
                runner.run_chunk(c * kChunk, std::min(spec.realizations, (c + 1) * kChunk), part);
            std::lock_guard<std::mutex> lock(merge_mutex);
            total.merge(part);
        } catch (...) {
            std::lock_guard<std::mutex> lock(merge_mutex);
            if (!error) error = std::current_exception();
            next = chunks;
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return runner.finish(total, secs, threads);
}

namespace {

Meta campaign_meta(const CampaignResult& r) {
    const CampaignSpec& s = r.spec;
    Meta m = {{"task", to_string(s.task)},
              {"kind", to_string(s.disorder.kind)},
              {"eta", fmt(s.disorder.V0)},
              {"L", fmt(s.L)},
              {"dx", fmt(s.dx)},
              {"base_seed", std::to_string(s.base_seed)},
              {"realizations", std::to_string(s.realizations)},
              {"completed", std::to_string(r.completed)},
              {"failed", std::to_string(r.failed)},
              {"epsilon_frac", fmt(s.epsilon_frac)}};
    if (s.task == Task::SpectralCompare) {
        m.push_back({"k0", fmt(s.k0)});
        m.push_back({"order", std::to_string(s.order)});
    }
    if (s.task == Task::WignerMap) {
        m.push_back({"E", fmt(s.E)});
        m.push_back({"alpha", fmt(s.alpha)});
    }
    return m;
}

Meta with_bins(Meta m, const BinSpec& b) {
    m.push_back({"bins", fmt(b.lo) + ":" + fmt(b.width) + ":" + std::to_string(b.count)});
    return m;
}

template <class F>
std::string render(F&& f) {
    std::ostringstream os;
    f(os);
    return os.str();
}

}  // namespace

std::vector<std::string> write_campaign(const CampaignResult& r, const std::string& dir, bool svg) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ParameterError("cannot create output directory '" + dir + "'");
    std::vector<std::string> files;
    auto put = [&](const std::string& name, const std::string& content) {
        write_file((std::filesystem::path(dir) / name).string(), content);
        files.push_back(name);
    };
    const Meta meta = campaign_meta(r);
    if (!r.curves.empty()) {
        const BinSpec bins = r.curves.begin()->second.hist.bins;
        const Meta mb = with_bins(meta, bins);
        std::vector<const SpectralCurve*> plot;
        for (const auto& [m, c] : r.curves) {
            put("spectral_" + to_string(m) + ".csv", render([&](std::ostream& os) { write_curve_csv(os, c, mb); }));
            plot.push_back(&c);
        }
        const SpectralCurve& exact = r.curves.at(Method::EigenRoute);
        put("error_ll.csv", render([&](std::ostream& os) {
                write_error_curve_csv(os, exact, r.curves.at(Method::LLEstimate), mb);
            }));
        put("l1.csv", render([&](std::ostream& os) {
                write_meta(os, mb);
                os << "method,l1_to_eigen\n";
                for (const auto& [m, c] : r.curves)
                    if (m != Method::EigenRoute) os << to_string(m) << ',' << fmt(l1_distance(c.hist, exact.hist)) << '\n';
            }));
        if (svg) put("spectral.svg", svg_curves(plot));
    }
    if (r.stats) {
        put("value_histogram.csv", render([&](std::ostream& os) { write_histogram_csv(os, r.stats->histogram, meta); }));
        put("correlation.csv", render([&](std::ostream& os) { write_correlation_csv(os, *r.stats, meta); }));
    }
    if (r.idos) {
        put("idos.csv", render([&](std::ostream& os) {
                write_meta(os, meta);
                os << "E,exact,weyl_V,weyl_Vu,err_V,err_Vu\n";
                const IdosResult& d = *r.idos;
                for (size_t q = 0; q < d.energies.size(); ++q)
                    os << fmt(d.energies[q]) << ',' << fmt(d.exact[q]) << ',' << fmt(d.weyl_v[q]) << ','
                       << fmt(d.weyl_vu[q]) << ',' << fmt(d.err_v[q]) << ',' << fmt(d.err_vu[q]) << '\n';
            }));
    }
    if (r.wigner) {
        const WignerResult& w = *r.wigner;
        put("wigner_FE.csv", render([&](std::ostream& os) { write_phase_grid_csv(os, w.F, meta); }));
        put("contours_H.csv", render([&](std::ostream& os) { write_contours_csv(os, w.level_H, meta); }));
        put("contours_H1.csv", render([&](std::ostream& os) { write_contours_csv(os, w.level_H1, meta); }));
        put("capture.csv", render([&](std::ostream& os) {
                write_meta(os, meta);
                os << "realization,states,capture_H,capture_H1\n";
                for (size_t i = 0; i < w.capture_H.size(); ++i)
                    os << i << ',' << w.window_states[i] << ',' << fmt(w.capture_H[i]) << ',' << fmt(w.capture_H1[i]) << '\n';
            }));
        if (svg) {
            const double kmax = 3.0 * std::sqrt(2.0 * std::max(std::abs(r.spec.E), r.spec.disorder.V0));
            put("wigner_FE.svg", svg_heatmap(w.F, {&w.level_H, &w.level_H1}, kmax));
        }
    }
    return files;
}

}  // namespace llspec
