#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "llspec/disorder.hpp"
#include "llspec/eigensolve.hpp"
#include "llspec/landscape.hpp"
#include "llspec/phasespace.hpp"
#include "llspec/spectral.hpp"

namespace llspec {

// Ordered "#key=value" header lines.
using Meta = std::vector<std::pair<std::string, std::string>>;

// Shortest round-trip text for a double (%.17g).
std::string fmt(double v);

void write_meta(std::ostream& os, const Meta& meta);
void write_potential_csv(std::ostream& os, const Potential& p);
void write_landscape_csv(std::ostream& os, const Potential& p, const Landscape& l);
void write_energies_csv(std::ostream& os, const EigenSolution& sol, const Meta& meta);
void write_histogram_csv(std::ostream& os, const Histogram& h, const Meta& meta);
void write_correlation_csv(std::ostream& os, const DisorderStats& st, const Meta& meta);
void write_curve_csv(std::ostream& os, const SpectralCurve& c, const Meta& meta);
// E,A_exact,A_est,diff on shared bins.
void write_error_curve_csv(std::ostream& os, const SpectralCurve& exact, const SpectralCurve& est, const Meta& meta);
// N rows (fixed k, ascending) of N comma-separated values.
void write_phase_grid_csv(std::ostream& os, const PhaseGrid& g, const Meta& meta);
void write_contours_csv(std::ostream& os, const ContourSet& c, const Meta& meta);

// Writes `content` to `path`; throws ParameterError when the file cannot be written.
void write_file(const std::string& path, const std::string& content);

}  // namespace llspec
