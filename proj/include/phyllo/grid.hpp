#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Core>

#include "phyllo/error.hpp"

namespace phyllo {

using Index = Eigen::Index;
using Complex = std::complex<double>;

template <typename Scalar>
using Rows = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using Row = Eigen::Array<Scalar, 1, Eigen::Dynamic>;

using RealRows = Rows<double>;
using Spectrum = Rows<Complex>;

enum class Geometry {
    Annulus,        ///< polar rings r_min..r_max, pinned outer rim, no-flux inner edge
    PeriodicStrip,  ///< a single periodic line of length 2π·r_min, no radial direction
};

/// Uniform polar grid on the annulus r_min ≤ r ≤ r_max.
///
/// Lengths are in units where the most unstable wavelength is 2π.  The last
/// grid ring and one exterior ghost ring at r_max + dr hold the outer
/// Dirichlet data; all other rings are free.
struct GridSpec {
    Geometry geometry = Geometry::Annulus;
    double r_min = 0.0;
    double r_max = 0.0;
    Index n_r = 0;
    Index n_theta = 0;

    double dr() const noexcept {
        return geometry == Geometry::Annulus ? (r_max - r_min) / double(n_r - 1) : 1.0;
    }
    double dtheta() const noexcept { return 2.0 * std::numbers::pi / double(n_theta); }
    double radius(Index i) const noexcept {
        return geometry == Geometry::Annulus ? r_min + double(i) * dr() : r_min;
    }
    double ghost_radius() const noexcept { return radius(n_r); }
    double angle(Index j) const noexcept { return double(j) * dtheta(); }

    /// Rings 0..free_rings()-1 evolve; the rest are pinned.
    Index free_rings() const noexcept { return geometry == Geometry::Annulus ? n_r - 1 : n_r; }
    Index n_modes() const noexcept { return n_theta / 2 + 1; }

    /// Quadrature weight of one sample on ring i (trapezoid in r, r dr dθ).
    double ring_weight(Index i) const noexcept;
    /// Total measure of the domain.
    double area() const noexcept;

    bool operator==(const GridSpec&) const = default;
};

/// Validated annulus grid; throws InvalidArgument.
GridSpec make_grid(double r_min, double r_max, Index n_r, Index n_theta);

/// Periodic line of the given length with n_x samples, used for 1D roll checks.
GridSpec make_strip(double length, Index n_x);

/// Samples on a GridSpec, ring-major.  `ghost` is the exterior ring used as
/// outer boundary data (zero for strips).
struct ScalarField {
    GridSpec grid;
    RealRows values;
    Row<double> ghost;

    ScalarField() = default;
    explicit ScalarField(const GridSpec& g)
        : grid(g), values(RealRows::Zero(g.n_r, g.n_theta)), ghost(Row<double>::Zero(g.n_theta)) {}

    double operator()(Index i, Index j) const { return values(i, j); }
    double& operator()(Index i, Index j) { return values(i, j); }

    bool all_finite() const;
};

/// Evaluate f(r, θ) on every ring, including the ghost ring.
template <typename Fn>
ScalarField sample(const GridSpec& grid, Fn&& f) {
    ScalarField out(grid);
    for (Index i = 0; i <= grid.n_r; ++i) {
        const double r = grid.radius(i);
        for (Index j = 0; j < grid.n_theta; ++j) {
            const double v = f(r, grid.angle(j));
            if (i < grid.n_r)
                out.values(i, j) = v;
            else
                out.ghost(j) = v;
        }
    }
    return out;
}

/// Radial three-point stencil.  Row i couples rings i-1, i, i+1; ring n_r is
/// the ghost ring.  Row 0 already folds in the no-flux reflection.
struct RadialStencil {
    Eigen::ArrayXd lower;
    Eigen::ArrayXd diag;
    Eigen::ArrayXd upper;
};

/// Conservative finite-volume form of ∂²/∂r² + (1/r)∂/∂r.
RadialStencil radial_laplacian_stencil(const GridSpec& grid);
/// Centered ∂/∂r, zero at the reflecting inner ring.
RadialStencil radial_derivative_stencil(const GridSpec& grid);

/// Apply a radial stencil to rows (n_r rows) with `ghost` as ring n_r.
template <typename Scalar>
Rows<Scalar> apply_radial(const RadialStencil& s, const Rows<Scalar>& rows, const Row<Scalar>& ghost) {
    const Index n = rows.rows();
    Rows<Scalar> out(n, rows.cols());
    for (Index i = 0; i < n; ++i) {
        out.row(i) = s.diag(i) * rows.row(i);
        if (i > 0 && s.lower(i) != 0.0) out.row(i) += s.lower(i) * rows.row(i - 1);
        if (s.upper(i) != 0.0) {
            if (i + 1 < n)
                out.row(i) += s.upper(i) * rows.row(i + 1);
            else
                out.row(i) += s.upper(i) * ghost;
        }
    }
    return out;
}

/// Adjoint of apply_radial under the ring-weighted inner product, restricted
/// to the grid rings (the ghost column is dropped).
template <typename Scalar>
Rows<Scalar> apply_radial_adjoint(const RadialStencil& s, const Eigen::ArrayXd& weights,
                                  const Rows<Scalar>& rows) {
    const Index n = rows.rows();
    Rows<Scalar> out(n, rows.cols());
    for (Index k = 0; k < n; ++k) {
        out.row(k) = (weights(k) * s.diag(k)) * rows.row(k);
        if (k > 0 && s.upper(k - 1) != 0.0) out.row(k) += (weights(k - 1) * s.upper(k - 1)) * rows.row(k - 1);
        if (k + 1 < n && s.lower(k + 1) != 0.0) out.row(k) += (weights(k + 1) * s.lower(k + 1)) * rows.row(k + 1);
        out.row(k) /= weights(k);
    }
    return out;
}

/// Ring weights W_i for i in [0, n_r).
Eigen::ArrayXd ring_weights(const GridSpec& grid);
/// Radii r_i for i in [0, n_r].
Eigen::ArrayXd ring_radii(const GridSpec& grid);

/// Real-to-half-complex transform along every ring (rows of `rows`).  The
/// coefficient c_m is normalised so that u_j = Σ c_m e^{i m θ_j} + c.c.
Spectrum forward_rings(const RealRows& rows);
RealRows inverse_rings(const Spectrum& spec, Index n_theta);

/// Spectrum of all grid rings followed by the ghost ring (n_r + 1 rows).
Spectrum to_spectrum(const ScalarField& f);

/// ∂f/∂θ, exact for band-limited rings; the Nyquist mode is dropped.
RealRows angular_derivative(const RealRows& rows);
/// ∂²f/∂θ², exact for band-limited rings.
RealRows angular_second_derivative(const RealRows& rows);

ScalarField laplacian(const ScalarField& f);
ScalarField radial_derivative(const ScalarField& f);
ScalarField gradient_norm_sq(const ScalarField& f);
double integrate(const ScalarField& f);
double inner(const ScalarField& f, const ScalarField& g);

}  // namespace phyllo
