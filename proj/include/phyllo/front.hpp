#pragma once

#include <span>
#include <vector>

#include "phyllo/grid.hpp"

namespace phyllo {

struct FrontSample {
    double t;
    double R;
    double nu;
};

/// Front radius and speed over time.  Speeds are filled by front_speed.
struct FrontTrace {
    std::vector<FrontSample> samples;
};

/// Ring envelope A(r) = √(2·⟨u²⟩_θ); equals a for a single mode a·cos(mθ).
Eigen::ArrayXd envelope(const ScalarField& u);

/// Innermost radius where the envelope rises through fraction × (median of
/// the envelope over the patterned rings), interpolated linearly between
/// rings.  Patterned rings are those above 10% of the envelope maximum.
/// Throws NoFront when there is no pattern.
double front_position(const Eigen::ArrayXd& radius, const Eigen::ArrayXd& env, double fraction = 0.5);
double front_position(const ScalarField& u, double fraction = 0.5);

/// ν = −dR/dt by centered differences, then a centered moving average over
/// `window` samples (shrinking at the ends).
std::vector<double> front_speed(std::span<const double> t, std::span<const double> R, int window = 5);
std::vector<double> front_speed(const FrontTrace& trace, int window = 5);

/// Linear spreading speed of σ(k) = µ − (1 − k²)², from the saddle-point
/// conditions on the complex wavenumber.  Approaches 4√µ as µ → 0.
double pulled_speed(double mu);

struct Periodicity {
    double period = 0.0;     ///< in ln R
    double deviation = 0.0;  ///< |period − ln φ| / ln φ
    double peak = 0.0;       ///< normalised autocorrelation at the period
    bool significant = false;
};

/// Dominant period of ν as a function of ln R from the autocorrelation of
/// the linearly detrended, uniformly resampled signal.  Requires the samples
/// to span at least two periods of ln φ; throws InvalidArgument otherwise.
Periodicity log_periodicity(std::span<const double> log_radius, std::span<const double> nu, double phi,
                            double significance = 0.3);
Periodicity log_periodicity(const FrontTrace& trace, double phi, double significance = 0.3);

}  // namespace phyllo
