#pragma once

#include <string>
#include <vector>

#include "llspec/disorder.hpp"
#include "llspec/eigensolve.hpp"
#include "llspec/histogram.hpp"
#include "llspec/landscape.hpp"

namespace llspec {

enum class Method { EigenRoute, ChebRoute, LLEstimate, ClassicalLimit, TrappeBaseline };
std::string to_string(Method m);

struct SpectralCurve {
    double k0 = 0.0;
    Method method = Method::EigenRoute;
    Histogram hist;  // density A(E) per bin, out-of-range fractions in below/above
    long realizations = 1;
    int order = 0;                    // Chebyshev order (ChebRoute only)
    bool resolution_warning = false;  // kernel width exceeds the bin width (ChebRoute only)
};

// Bins of width V0/100 over [min support - V0, max support + 5 V0], shifted by the lattice
// kinetic energy of k0. Support: speckle [0, V0 ln 1e6], GaussGauss [-4.9 V0, 4.9 V0]
// (both cut at tail probability ~1e-6).
BinSpec default_spectral_bins(const Disorder& d, const Grid& grid, double k0);

// Histogram of the eigenvalues weighted by |<k0|phi_a>|^2 (not renormalized).
SpectralCurve spectral_eigen(const Potential& p, double k0, const BinSpec& bins);
SpectralCurve curve_from_measure(const SpectralMeasure& m, double k0, const BinSpec& bins);

// Affine map E = center + half_width * x taking the padded Gershgorin interval to [-1, 1].
struct ChebScale {
    double center = 0.0;
    double half_width = 1.0;
};
ChebScale cheb_scale(const Potential& p);

// Jackson damping factors g_0..g_{order-1}.
std::vector<double> jackson_kernel(int order);

// mu_m = <k0| T_m((H - center)/half_width) |k0>, m = 0..order-1, by stencil applications.
std::vector<double> chebyshev_moments(const Potential& p, double k0, int order, const ChebScale& s);

// Jackson-damped Chebyshev reconstruction integrated exactly over each bin.
// Throws ParameterError when order < 64.
SpectralCurve spectral_cheb(const Potential& p, double k0, const BinSpec& bins, int order);

// Rigorous upper bound on L1(EigenRoute, ChebRoute): each eigenvalue's broadened delta
// leaves its bin with mass at most min(1, s^2/d^2) (Chebyshev inequality, s^2 the
// kernel's second moment about the eigenvalue, d the distance to the nearest bin edge),
// and each leaked unit costs at most 2 in L1.
double cheb_l1_bound(const SpectralMeasure& m, const BinSpec& bins, int order, const ChebScale& s);

// Histogram of V_u + k0^2/2 (each site weight 1/N).
SpectralCurve spectral_ll(const Landscape& l, double k0, const BinSpec& bins);

// Histogram of V + k0^2/2 (classical limit), pooled over the given potentials.
SpectralCurve baseline_classical(const std::vector<Potential>& ensemble, const BinSpec& bins, double k0 = 0.0);

// A0(E) = exp(-E^2/(2 V0^2)) / (sqrt(2 pi) V0) * (1 - E (3 V0^2 - E^2) / (12 V0^4)).
double trappe_density(double E, double V0);
// Bin averages of trappe_density by 3-point Gauss-Legendre quadrature.
SpectralCurve baseline_trappe(double V0, const BinSpec& bins);

}  // namespace llspec
