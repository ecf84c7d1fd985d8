#pragma once

#include <vector>

#include <Eigen/Core>

#include "phyllo/dynamics.hpp"
#include "phyllo/modes.hpp"

namespace phyllo {

/// Dominant wavevector pair at radius r on the unrolled cylinder
/// (axial coordinate = r, circumference 2πr).  k = (ℓ, m/r).
///
/// A mode contributes the phase ψ = mθ − ℓz, matching the convention of
/// `decompose`; maxima of the pair sit where ψ_m ≡ ψ_n ≡ 0 (mod 2π).
struct LocalLattice {
    double r = 0.0;
    int m = 0;
    int n = 0;
    Eigen::Vector2d k_m = Eigen::Vector2d::Zero();
    Eigen::Vector2d k_n = Eigen::Vector2d::Zero();
    double a_m = 0.0;
    double a_n = 0.0;
};

struct LatticeMetrics {
    double rho = 0.0;
    double delta = 0.0;
    double eta = 0.0;
    double epsilon = 0.0;
};

struct RiseDivergence {
    double rho;
    double delta;  ///< in (−π, π]
};

/// Packages the dominant pair at r.  Throws InvalidArgument for a single
/// active mode, a non-coprime pair or an undefined radial wavenumber.
LocalLattice local_lattice(const std::vector<ModeProfile>& profiles, double r);

/// Generator of the maxima lattice with the smallest positive axial step h:
/// ρ = h/r and δ its angular step.  Throws InvalidArgument for parallel
/// wavevectors.
RiseDivergence rise_divergence(const LocalLattice& lat);

/// Distance from the origin to lattice point j of the normalised cylinder
/// lattice (j·δ, j·ρ), using the nearest angular image.
double neighbor_distance(double delta, double rho, int j);

/// Rhombic branch d_m = d_n of the cylinder lattice, sampled at n_samples
/// points with ρ descending from the (n−m, m, n) triple point to the
/// (m, n, m+n) triple point.  Each entry is (|δ|, ρ).
std::vector<Eigen::Vector2d> van_iterson_branch(int m, int n, int n_samples);

/// Distance in the (δ, ρ) plane from (|delta|, rho) to the (m, n) branch
/// polyline.
double distance_to_branch(const std::vector<Eigen::Vector2d>& branch, double delta, double rho);

/// π d_min² / (4 · 2πρ) for the lattice generated by (δ, ρ).
double packing_efficiency(double delta, double rho);

/// Area-weighted mean of energy_density over the rings in [r − w/2, r + w/2].
double local_energy(const ScalarField& u, double r, const ModelParams& p, double window = 4.0 * std::numbers::pi);

/// ρ, δ, η and ε at r.
LatticeMetrics lattice_metrics(const ScalarField& u, const std::vector<ModeProfile>& profiles, double r,
                               const ModelParams& p, double window = 4.0 * std::numbers::pi);

}  // namespace phyllo
