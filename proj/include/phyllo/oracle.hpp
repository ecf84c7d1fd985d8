#pragma once

#include <vector>

#include "phyllo/grid.hpp"

namespace phyllo {

struct CylinderPoint {
    double axial;
    double angle;  ///< radians in [0, 2π)
};

/// Points on a cylinder.  Distances use the nearest angular image with arc
/// length R·Δθ, R = circumference / 2π.
struct PointConfig {
    std::vector<CylinderPoint> points;
    double circumference = 2.0 * std::numbers::pi;

    double radius() const noexcept { return circumference / (2.0 * std::numbers::pi); }
    double distance(const CylinderPoint& a, const CylinderPoint& b) const;
};

struct PlacementOptions {
    int scan_samples = 4096;
    double refine_tol = 1e-10;
    /// When starting from nothing, the rise shrinks geometrically from one
    /// circumference to rise_step over this many placements.  0 disables.
    int ramp_points = 200;
};

/// Repulsion-driven placement: each new point sits one rise step above the
/// previous one at the angle minimising Σ d_i^(−exponent) over all existing
/// points.  An empty start places the first point at (0, 0) and applies the
/// rise ramp; a non-empty start uses rise_step throughout.
PointConfig place_points(int count, double rise_step, double exponent, const PointConfig& start = {},
                         const PlacementOptions& opts = {});

/// Successive angle differences reduced to (−π, π].
std::vector<double> divergence_series(const PointConfig& config);

/// Strict 8-neighbour maxima above threshold × (global max), sub-grid refined
/// by separable quadratic fits, ordered by radius.  The circumference is
/// 2π·r_ref; a non-positive r_ref selects the median radius of the maxima.
PointConfig extract_maxima(const ScalarField& u, double threshold = 0.25, double r_ref = 0.0);

struct Comparison {
    double mean_distance = 0.0;     ///< in pattern wavelengths (2π)
    double matched_fraction = 0.0;  ///< field points matched within half a wavelength
    double rotation = 0.0;          ///< applied to the first config
    double axial_shift = 0.0;
};

/// Registers `field` onto `reference` by a global rotation and axial shift
/// minimising the summed (capped) nearest-neighbour distance, then scores the
/// match.  Throws InvalidArgument on empty input or mismatched circumference.
Comparison compare_maxima(const PointConfig& field, const PointConfig& reference);

}  // namespace phyllo
