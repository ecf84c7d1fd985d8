#include "phyllo/grid.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <string>

#include <unsupported/Eigen/FFT>

namespace phyllo {

namespace {

Eigen::FFT<double>& ring_fft() {
    thread_local Eigen::FFT<double> fft = [] {
        Eigen::FFT<double> f;
        f.SetFlag(Eigen::FFT<double>::HalfSpectrum);
        return f;
    }();
    return fft;
}

constexpr double kMaxDr = std::numbers::pi / 4.0;

}  // namespace

double GridSpec::ring_weight(Index i) const noexcept {
    if (geometry == Geometry::PeriodicStrip) return r_min * dtheta();
    const double end = (i == 0 || i == n_r - 1) ? 0.5 : 1.0;
    return end * radius(i) * dr() * dtheta();
}

double GridSpec::area() const noexcept {
    if (geometry == Geometry::PeriodicStrip) return 2.0 * std::numbers::pi * r_min;
    return std::numbers::pi * (r_max * r_max - r_min * r_min);
}

GridSpec make_grid(double r_min, double r_max, Index n_r, Index n_theta) {
    if (!(r_min > 0.0)) throw InvalidArgument("grid.r_min must be positive (the center is excised)");
    if (!(r_max > r_min)) throw InvalidArgument("grid.r_max must exceed grid.r_min");
    if (n_r < 2) throw InvalidArgument("grid.n_r must be at least 2");
    if (n_theta < 4 || n_theta % 2 != 0) throw InvalidArgument("grid.n_theta must be even and at least 4");
    GridSpec g{Geometry::Annulus, r_min, r_max, n_r, n_theta};
    if (g.dr() > kMaxDr + 1e-12)
        throw InvalidArgument("grid radial spacing " + std::to_string(g.dr()) +
                              " exceeds pi/4 (fewer than 8 samples per wavelength)");
    return g;
}

GridSpec make_strip(double length, Index n_x) {
    if (!(length > 0.0)) throw InvalidArgument("strip length must be positive");
    if (n_x < 4 || n_x % 2 != 0) throw InvalidArgument("strip sample count must be even and at least 4");
    const double s = length / (2.0 * std::numbers::pi);
    return GridSpec{Geometry::PeriodicStrip, s, s, 1, n_x};
}

bool ScalarField::all_finite() const { return values.allFinite() && ghost.allFinite(); }

RadialStencil radial_laplacian_stencil(const GridSpec& grid) {
    const Index n = grid.n_r;
    RadialStencil s{Eigen::ArrayXd::Zero(n), Eigen::ArrayXd::Zero(n), Eigen::ArrayXd::Zero(n)};
    if (grid.geometry != Geometry::Annulus) return s;
    const double h = grid.dr();
    const double h2 = h * h;
    for (Index i = 0; i < n; ++i) {
        const double r = grid.radius(i);
        const double r_out = r + 0.5 * h;
        const double r_in = r - 0.5 * h;
        if (i == 0) {
            // Half cell [r_0, r_0 + h/2] with zero flux through r_0.
            s.upper(i) = 2.0 * r_out / (r * h2);
            s.diag(i) = -s.upper(i);
        } else {
            s.lower(i) = r_in / (r * h2);
            s.upper(i) = r_out / (r * h2);
            s.diag(i) = -(s.lower(i) + s.upper(i));
        }
    }
    return s;
}

RadialStencil radial_derivative_stencil(const GridSpec& grid) {
    const Index n = grid.n_r;
    RadialStencil s{Eigen::ArrayXd::Zero(n), Eigen::ArrayXd::Zero(n), Eigen::ArrayXd::Zero(n)};
    if (grid.geometry != Geometry::Annulus) return s;
    const double c = 0.5 / grid.dr();
    for (Index i = 1; i < n; ++i) {
        s.lower(i) = -c;
        s.upper(i) = c;
    }
    return s;
}

Eigen::ArrayXd ring_weights(const GridSpec& grid) {
    Eigen::ArrayXd w(grid.n_r);
    for (Index i = 0; i < grid.n_r; ++i) w(i) = grid.ring_weight(i);
    return w;
}

Eigen::ArrayXd ring_radii(const GridSpec& grid) {
    Eigen::ArrayXd r(grid.n_r + 1);
    for (Index i = 0; i <= grid.n_r; ++i) r(i) = grid.radius(i);
    return r;
}

Spectrum forward_rings(const RealRows& rows) {
    const Index n = rows.cols();
    const Index nm = n / 2 + 1;
    Spectrum out(rows.rows(), nm);
    auto& fft = ring_fft();
    std::vector<Complex> buf(static_cast<std::size_t>(n));
    const double scale = 1.0 / double(n);
    for (Index i = 0; i < rows.rows(); ++i) {
        fft.fwd(buf.data(), rows.row(i).data(), n);
        for (Index m = 0; m < nm; ++m) out(i, m) = buf[std::size_t(m)] * scale;
    }
    return out;
}

RealRows inverse_rings(const Spectrum& spec, Index n_theta) {
    const Index nm = n_theta / 2 + 1;
    RealRows out(spec.rows(), n_theta);
    auto& fft = ring_fft();
    std::vector<Complex> buf(static_cast<std::size_t>(nm));
    const double scale = double(n_theta);
    for (Index i = 0; i < spec.rows(); ++i) {
        for (Index m = 0; m < nm; ++m) buf[std::size_t(m)] = spec(i, m) * scale;
        buf[0].imag(0.0);
        buf[std::size_t(nm - 1)].imag(0.0);
        fft.inv(out.row(i).data(), buf.data(), n_theta);
    }
    return out;
}

Spectrum to_spectrum(const ScalarField& f) {
    RealRows all(f.grid.n_r + 1, f.grid.n_theta);
    all.topRows(f.grid.n_r) = f.values;
    all.row(f.grid.n_r) = f.ghost;
    return forward_rings(all);
}

RealRows angular_derivative(const RealRows& rows) {
    Spectrum s = forward_rings(rows);
    const Index nm = s.cols();
    for (Index m = 0; m < nm; ++m) s.col(m) *= Complex(0.0, double(m));
    s.col(nm - 1).setZero();
    return inverse_rings(s, rows.cols());
}

RealRows angular_second_derivative(const RealRows& rows) {
    Spectrum s = forward_rings(rows);
    for (Index m = 0; m < s.cols(); ++m) s.col(m) *= -double(m) * double(m);
    return inverse_rings(s, rows.cols());
}

namespace {

// (1/r²) per grid ring, broadcast along θ.
RealRows scale_by_inverse_r2(const GridSpec& grid, RealRows rows) {
    for (Index i = 0; i < grid.n_r; ++i) {
        const double r = grid.radius(i);
        rows.row(i) /= r * r;
    }
    return rows;
}

}  // namespace

ScalarField laplacian(const ScalarField& f) {
    const GridSpec& g = f.grid;
    ScalarField out(g);
    out.values = apply_radial(radial_laplacian_stencil(g), f.values, f.ghost) +
                 scale_by_inverse_r2(g, angular_second_derivative(f.values));
    return out;
}

ScalarField radial_derivative(const ScalarField& f) {
    ScalarField out(f.grid);
    out.values = apply_radial(radial_derivative_stencil(f.grid), f.values, f.ghost);
    return out;
}

ScalarField gradient_norm_sq(const ScalarField& f) {
    const GridSpec& g = f.grid;
    ScalarField out(g);
    const RealRows dr = apply_radial(radial_derivative_stencil(g), f.values, f.ghost);
    const RealRows dth = angular_derivative(f.values);
    out.values = dr.square() + scale_by_inverse_r2(g, dth.square());
    return out;
}

double integrate(const ScalarField& f) {
    const GridSpec& g = f.grid;
    double total = 0.0;
    for (Index i = 0; i < g.n_r; ++i) total += g.ring_weight(i) * f.values.row(i).sum();
    return total;
}

double inner(const ScalarField& f, const ScalarField& g) {
    ScalarField prod(f.grid);
    prod.values = f.values * g.values;
    return integrate(prod);
}

}  // namespace phyllo
