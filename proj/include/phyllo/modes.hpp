#pragma once

#include <map>
#include <numbers>
#include <utility>
#include <vector>

#include "phyllo/grid.hpp"

namespace phyllo {

struct GoldenConstants {
    static constexpr double phi = std::numbers::phi;
    static constexpr double golden_angle = 2.0 * std::numbers::pi / (std::numbers::phi * std::numbers::phi);
    static constexpr double ln_phi = 0.48121182505960344;
};

/// Radial profile of one circumferential mode,
///   u ≈ Σ_m a_m(r) cos(mθ + φ_m(r)),   ℓ_m = −dφ_m/dr.
struct ModeProfile {
    int m = 0;
    Eigen::ArrayXd radius;
    Eigen::ArrayXd amplitude;
    Eigen::ArrayXd phase;              ///< unwrapped inward from the rim
    Eigen::ArrayXd radial_wavenumber;  ///< NaN where invalid
    std::vector<bool> valid;           ///< amplitude above the floor

    Index size() const noexcept { return radius.size(); }
};

struct DecomposeOptions {
    /// Relative floor: rings with a_m below floor × (global max amplitude) are invalid.
    double amplitude_floor = 1e-4;
};

/// Per-ring angular transform for modes 0..m_max.  a_0 = |c_0|, a_m = 2|c_m|.
std::vector<ModeProfile> decompose(const ScalarField& u, int m_max, const DecomposeOptions& opts = {});

/// ℓ_m = −dφ_m/dr by centered differences on valid rings (one-sided at the
/// ends of a valid run); NaN elsewhere.
Eigen::ArrayXd radial_wavenumber(const ModeProfile& p);

/// Maximum amplitude of each mode over all rings.
std::map<int, double> max_amplitudes(const std::vector<ModeProfile>& profiles);

struct CurvePoint {
    double scaled_radius;  ///< r / φ^j
    double amplitude;
    int j;
};

/// (r/φ^j, a_{m_j}(r)) for every ring and every sequence member m_j.
std::vector<CurvePoint> invariant_amplitude_curve(const std::vector<ModeProfile>& profiles,
                                                  const std::vector<int>& sequence);

struct SimilarityResidual {
    double amplitude;   ///< relative L2 of a_{m_{j+1}}(φr) − a_{m_j}(r)
    double wavenumber;  ///< relative L2 of ℓ_{m_{j+1}}(φr) + ℓ_{m_j}(r)
    Index samples;
};

/// Residual of a_{m_{j+1}}(φr) = a_{m_j}(r) and ℓ_{m_{j+1}}(φr) = −ℓ_{m_j}(r)
/// over the common radial range, linearly interpolated.  `restrict_to`, when
/// non-empty, further limits the inner-mode radii considered.
SimilarityResidual self_similarity_residual(const ModeProfile& inner, const ModeProfile& outer, double phi,
                                            std::pair<double, double> restrict_to = {0.0, 0.0});

/// Same, looking the modes up by sequence index j (inner = m_j, outer = m_{j+1}).
SimilarityResidual self_similarity_residual(const std::vector<ModeProfile>& profiles,
                                            const std::vector<int>& sequence, std::size_t j, double phi);

/// Two largest-amplitude modes (m ≥ 1) at the ring nearest r, ordered m < n.
/// Near-ties (within 1%) prefer a coprime pair, then the smaller m.
std::pair<int, int> dominant_pair(const std::vector<ModeProfile>& profiles, double r);

/// Index of the ring nearest r.
Index nearest_ring(const ModeProfile& p, double r);

/// Linear interpolation of a profile quantity at r (NaN outside or invalid).
double interpolate(const Eigen::ArrayXd& radius, const Eigen::ArrayXd& values, double r);

/// Extracts the dominant subsequence: modes whose max amplitude exceeds
/// `fraction` of the largest, sorted ascending.
std::vector<int> dominant_modes(const std::map<int, double>& maxima, double fraction, int m_min = 1);

/// True when every element from the third on is the sum of the previous two.
bool is_fibonacci_like(const std::vector<int>& seq);

}  // namespace phyllo
