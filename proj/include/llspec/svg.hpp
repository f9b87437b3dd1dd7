#pragma once

#include <string>
#include <vector>

#include "llspec/phasespace.hpp"
#include "llspec/spectral.hpp"

namespace llspec {

// Heatmap of a phase-space grid (block-averaged to at most 200x200 cells) restricted to
// |k| <= k_max, with contour overlays.
std::string svg_heatmap(const PhaseGrid& g, const std::vector<const ContourSet*>& overlays, double k_max);

// Line plot of spectral curves sharing one energy axis.
std::string svg_curves(const std::vector<const SpectralCurve*>& curves);

}  // namespace llspec
