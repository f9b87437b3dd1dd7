#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "llspec/disorder.hpp"
#include "llspec/phasespace.hpp"
#include "llspec/spectral.hpp"

namespace llspec {

enum class Task { SpectralCompare, WignerMap, DisorderStats, IdosCompare };
std::string to_string(Task t);
Task parse_task(const std::string& name);

struct CampaignSpec {
    Disorder disorder;
    double L = 300.0;
    double dx = 0.05;
    long realizations = 1;
    std::uint64_t base_seed = 1;
    Task task = Task::SpectralCompare;
    double k0 = 0.0;
    double E = 0.5;
    double alpha = 0.2;
    std::optional<BinSpec> bins;  // default: default_spectral_bins / default_value_bins
    int order = 0;                // Chebyshev order; 0 disables the Chebyshev route
    double epsilon_frac = 0.1;
    bool trappe = true;           // TrappeBaseline for GaussGauss at k0 = 0
    int idos_points = 20;         // IdosCompare: energies V0 * [idos_lo, idos_hi]
    double idos_lo = 0.2;
    double idos_hi = 2.0;
    int threads = 0;              // 0: LLSPEC_THREADS, else hardware concurrency

    // Throws ParameterError on incomplete or invalid settings.
    void validate() const;
};

struct IdosResult {
    std::vector<double> energies;
    std::vector<double> exact;        // mean eigenvalue count below E
    std::vector<double> weyl_v;       // mean Weyl count with V
    std::vector<double> weyl_vu;      // mean Weyl count with V_u
    std::vector<double> err_v;        // mean |weyl_v - exact| per realization
    std::vector<double> err_vu;       // mean |weyl_vu - exact|
};

struct WignerResult {
    WignerMap F;                  // F_E averaged over realizations
    WeylSymbol H, H1;             // symbols of realization 0
    ContourSet level_H, level_H1; // level sets at E of realization 0
    std::vector<double> capture_H, capture_H1;  // per realization
    std::vector<int> window_states;             // per realization
};

struct CampaignResult {
    CampaignSpec spec;
    long completed = 0;
    long failed = 0;
    std::vector<long> failed_indices;
    double wall_seconds = 0.0;
    int threads_used = 1;
    std::map<Method, SpectralCurve> curves;
    std::optional<DisorderStats> stats;
    std::vector<double> site0_values;  // V(x_0) of every realization (DisorderStats)
    std::optional<IdosResult> idos;
    std::optional<WignerResult> wigner;
};

int resolve_threads(int requested);

// Runs realizations i = 0..R-1 with seed mix_seed(base_seed, i) on a worker pool. All
// aggregates use exact fixed-point sums, so results do not depend on scheduling or on the
// worker count. Realizations failing with NumericalError are skipped and counted; more
// than 1% failures raise NumericalError.
CampaignResult run_campaign(const CampaignSpec& spec);

// Writes the campaign CSV files into `dir` (created if missing) and returns their names.
// SVG files are added when `svg` is set. Contents are independent of the thread count.
std::vector<std::string> write_campaign(const CampaignResult& r, const std::string& dir, bool svg);

}  // namespace llspec
