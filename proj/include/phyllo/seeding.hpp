#pragma once

#include "phyllo/grid.hpp"

namespace phyllo {

/// Spiral-lattice initial condition built from the resonant triad
/// (m, n, m+n).  Phases follow Φ_{m+n} = Φ_m + Φ_n − resonance_sum.
struct ParastichySeed {
    int m = 13;
    int n = 21;
    double r0 = 34.0;
    double band_width = 6.0 * std::numbers::pi;
    double amplitude = 0.05;
    double phase_m = 0.0;
    double phase_n = 0.0;
    double resonance_sum = 0.0;  ///< 0 or π
    /// Width of the raised-cosine ramp at the inner band edge.  Non-positive
    /// means one wavelength, clipped to half the band.
    double taper_width = 0.0;

    void validate() const;
    double phase_sum_mode() const noexcept { return phase_m + phase_n - resonance_sum; }
    double effective_taper() const noexcept;
};

struct TriadWavenumbers {
    double ell_m;
    double ell_n;
    double ell_sum;
};

/// Radial wavenumbers of the triad at radius r: ℓ_m = +√(1 − m²/r²),
/// ℓ_n = −√(1 − n²/r²) and ℓ_{m+n} = ℓ_m + ℓ_n.
TriadWavenumbers parastichy_wavevectors(int m, int n, double r);

/// amplitude · Σ_i cos(ℓ_i (r − r0) − iθ + Φ_i) on [r0, r0 + band_width],
/// ramped in over the taper and zero inside r0.  The ghost ring carries the
/// same formula so the outer rim holds the seeded pattern.
ScalarField seed_field(const GridSpec& grid, const ParastichySeed& seed);

int gcd(int a, int b);

}  // namespace phyllo
