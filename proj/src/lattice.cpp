#include "phyllo/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace phyllo {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * kPi);
    return a <= -kPi ? a + 2.0 * kPi : a;
}

// x·a + y·b = gcd(a, b)
void extended_euclid(long a, long b, long& x, long& y) {
    long x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        const long q = a / b;
        std::tie(a, b) = std::make_pair(b, a - q * b);
        std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
        std::tie(y0, y1) = std::make_pair(y1, y0 - q * y1);
    }
    x = x0;
    y = y0;
}

const ModeProfile& find_profile(const std::vector<ModeProfile>& profiles, int m) {
    for (const auto& p : profiles)
        if (p.m == m) return p;
    throw InvalidArgument("mode " + std::to_string(m) + " missing from profiles");
}

}  // namespace

LocalLattice local_lattice(const std::vector<ModeProfile>& profiles, double r) {
    const auto [m, n] = dominant_pair(profiles, r);
    if (std::gcd(m, n) != 1)
        throw InvalidArgument("non-coprime dominant pair (" + std::to_string(m) + ", " + std::to_string(n) +
                              ") at r = " + std::to_string(r));
    const ModeProfile& pm = find_profile(profiles, m);
    const ModeProfile& pn = find_profile(profiles, n);
    LocalLattice lat;
    lat.r = r;
    lat.m = m;
    lat.n = n;
    const double lm = interpolate(pm.radius, pm.radial_wavenumber, r);
    const double ln = interpolate(pn.radius, pn.radial_wavenumber, r);
    if (!std::isfinite(lm) || !std::isfinite(ln))
        throw InvalidArgument("radial wavenumber undefined for the dominant pair at r = " + std::to_string(r));
    lat.k_m = {lm, double(m) / r};
    lat.k_n = {ln, double(n) / r};
    lat.a_m = interpolate(pm.radius, pm.amplitude, r);
    lat.a_n = interpolate(pn.radius, pn.amplitude, r);
    return lat;
}

RiseDivergence rise_divergence(const LocalLattice& lat) {
    const int m = lat.m, n = lat.n;
    if (m < 1 || n < 1 || std::gcd(m, n) != 1) throw InvalidArgument("rise_divergence needs a coprime pair");
    const double lm = lat.k_m(0), ln = lat.k_n(0);
    // m δ − ℓ_m h = 2πp,  n δ − ℓ_n h = 2πq.
    const double D = double(n) * lm - double(m) * ln;
    if (!(std::abs(D) > 1e-12 * (std::abs(lm) + std::abs(ln) + 1.0)))
        throw InvalidArgument("parallel wavevectors: lattice determinant vanishes");
    long x = 0, y = 0;
    extended_euclid(m, n, x, y);
    const long s = D > 0 ? 1 : -1;
    const double q = double(s * x), p = double(-s * y);
    const double h = 2.0 * kPi / std::abs(D);
    const double delta = 2.0 * kPi * (q * lm - p * ln) / D;
    return {h / lat.r, wrap_angle(delta)};
}

double neighbor_distance(double delta, double rho, int j) {
    const double dth = wrap_angle(double(j) * delta);
    const double dz = double(j) * rho;
    return std::hypot(dth, dz);
}

std::vector<Eigen::Vector2d> van_iterson_branch(int m, int n, int n_samples) {
    if (m < 1 || n <= m) throw InvalidArgument("van_iterson_branch requires 1 <= m < n");
    if (std::gcd(m, n) != 1) throw InvalidArgument("van_iterson_branch requires a coprime pair");
    if (n_samples < 2) throw InvalidArgument("van_iterson_branch needs at least 2 samples");
    long x = 0, y = 0;
    extended_euclid(m, n, x, y);  // x m + y n = 1
    std::vector<Eigen::Vector2d> out;
    out.reserve(std::size_t(n_samples));
    // γ is the angle between the equal-length vectors to points m and n;
    // 60° and 120° are the two hexagonal end points.
    for (int k = 0; k < n_samples; ++k) {
        const double gamma = kPi / 3.0 + (kPi / 3.0) * double(k) / double(n_samples - 1);
        const double a = std::atan2(double(m) * std::sin(gamma), double(n) - double(m) * std::cos(gamma));
        const double s = 2.0 * kPi / std::abs(double(n) * std::cos(a) - double(m) * std::cos(a + gamma));
        const double rho = s * std::sin(a) / double(m);
        const double delta = double(x) * s * std::cos(a) + double(y) * s * std::cos(a + gamma);
        out.emplace_back(std::abs(wrap_angle(delta)), rho);
    }
    return out;
}

double distance_to_branch(const std::vector<Eigen::Vector2d>& branch, double delta, double rho) {
    if (branch.empty()) throw InvalidArgument("empty branch");
    const Eigen::Vector2d q(std::abs(delta), rho);
    double best = (branch.front() - q).norm();
    for (std::size_t i = 1; i < branch.size(); ++i) {
        const Eigen::Vector2d a = branch[i - 1], d = branch[i] - branch[i - 1];
        const double len2 = d.squaredNorm();
        const double t = len2 > 0.0 ? std::clamp((q - a).dot(d) / len2, 0.0, 1.0) : 0.0;
        best = std::min(best, (a + t * d - q).norm());
    }
    return best;
}

double packing_efficiency(double delta, double rho) {
    if (!(rho > 0.0) || !std::isfinite(rho) || !std::isfinite(delta))
        throw InvalidArgument("packing_efficiency requires finite delta and rho > 0");
    // Any planar lattice with cell area A has a vector no longer than
    // √(2A/√3), so axial offsets beyond that bound cannot hold d_min.
    const double bound = std::sqrt(2.0 * (2.0 * kPi * rho) / std::sqrt(3.0));
    const int J = int(std::ceil(bound / rho)) + 1;
    double d_min = 2.0 * kPi;
    for (int j = 1; j <= J; ++j) d_min = std::min(d_min, neighbor_distance(delta, rho, j));
    return kPi * d_min * d_min / (4.0 * 2.0 * kPi * rho);
}

double local_energy(const ScalarField& u, double r, const ModelParams& p, double window) {
    const GridSpec& g = u.grid;
    if (g.geometry != Geometry::Annulus) throw InvalidArgument("local_energy requires an annulus grid");
    if (!(window >= 2.0 * kPi - 1e-12)) throw InvalidArgument("local_energy window must be at least 2*pi");
    const double lo = r - 0.5 * window, hi = r + 0.5 * window;
    const double tol = 1e-9 * g.dr();
    if (lo < g.r_min - tol || hi > g.r_max + tol)
        throw InvalidArgument("local_energy window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                              "] extends outside the grid");
    const ScalarField e = energy_density(u, p);
    double num = 0.0, den = 0.0;
    for (Index i = 0; i < g.n_r; ++i) {
        const double ri = g.radius(i);
        if (ri < lo - tol || ri > hi + tol) continue;
        num += ri * e.values.row(i).sum();
        den += ri * double(g.n_theta);
    }
    if (den == 0.0) throw InvalidArgument("local_energy window contains no rings");
    return num / den;
}

LatticeMetrics lattice_metrics(const ScalarField& u, const std::vector<ModeProfile>& profiles, double r,
                               const ModelParams& p, double window) {
    const LocalLattice lat = local_lattice(profiles, r);
    const RiseDivergence rd = rise_divergence(lat);
    LatticeMetrics out;
    out.rho = rd.rho;
    out.delta = rd.delta;
    out.eta = packing_efficiency(rd.delta, rd.rho);
    out.epsilon = local_energy(u, r, p, window);
    return out;
}

}  // namespace phyllo
