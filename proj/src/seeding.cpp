#include "phyllo/seeding.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace phyllo {

int gcd(int a, int b) { return std::gcd(a, b); }

void ParastichySeed::validate() const {
    if (m < 1 || n <= m) throw InvalidArgument("seed requires 1 <= seed.m < seed.n");
    if (gcd(m, n) != 1) throw InvalidArgument("seed.m and seed.n must be coprime");
    if (!(r0 >= double(n))) throw InvalidArgument("seed.r0 must be at least seed.n (real radial wavenumbers)");
    if (!(band_width > 0.0)) throw InvalidArgument("seed.band_width must be positive");
    if (!(amplitude >= 0.0)) throw InvalidArgument("seed.amplitude must be non-negative");
    const double s = std::remainder(resonance_sum, std::numbers::pi);
    if (std::abs(s) > 1e-12) throw InvalidArgument("seed resonance sum must be 0 or pi");
}

double ParastichySeed::effective_taper() const noexcept {
    const double w = taper_width > 0.0 ? taper_width : 2.0 * std::numbers::pi;
    return std::min(w, 0.5 * band_width);
}

TriadWavenumbers parastichy_wavevectors(int m, int n, double r) {
    if (m < 1 || n <= m) throw InvalidArgument("parastichy pair requires 1 <= m < n");
    if (!(r >= double(n)))
        throw InvalidArgument("radius " + std::to_string(r) + " is inside n = " + std::to_string(n) +
                              "; radial wavenumber would be imaginary");
    const double qm = double(m) / r;
    const double qn = double(n) / r;
    const double lm = std::sqrt(1.0 - qm * qm);
    const double ln = -std::sqrt(1.0 - qn * qn);
    return {lm, ln, lm + ln};
}

ScalarField seed_field(const GridSpec& grid, const ParastichySeed& seed) {
    seed.validate();
    if (grid.geometry != Geometry::Annulus) throw InvalidArgument("seeding requires an annulus grid");
    const double r_end = seed.r0 + seed.band_width;
    if (seed.r0 < grid.r_min || r_end > grid.r_max + 1e-9)
        throw InvalidArgument("seed band [r0, r0 + band_width] lies outside the grid");
    if (grid.n_theta < 4 * (seed.m + seed.n))
        throw InvalidArgument("grid.n_theta must be at least 4(m + n) to resolve the seeded triad");

    const auto ell = parastichy_wavevectors(seed.m, seed.n, seed.r0);
    const double phase_k = seed.phase_sum_mode();
    const double taper = seed.effective_taper();
    const bool reaches_rim = r_end >= grid.r_max - 1e-9;
    const double a = seed.amplitude;
    return sample(grid, [&](double r, double th) {
        if (r < seed.r0 - 1e-12) return 0.0;
        if (r > r_end + 1e-9 && !reaches_rim) return 0.0;
        const double x = r - seed.r0;
        double env = 1.0;
        if (x < taper) env = 0.5 * (1.0 - std::cos(std::numbers::pi * x / taper));
        return a * env *
               (std::cos(ell.ell_m * x - seed.m * th + seed.phase_m) +
                std::cos(ell.ell_n * x - seed.n * th + seed.phase_n) +
                std::cos(ell.ell_sum * x - (seed.m + seed.n) * th + phase_k));
    });
}

}  // namespace phyllo
