#include "phyllo/front.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

namespace phyllo {

Eigen::ArrayXd envelope(const ScalarField& u) {
    return (2.0 * u.values.square().rowwise().mean()).sqrt();
}

double front_position(const Eigen::ArrayXd& radius, const Eigen::ArrayXd& env, double fraction) {
    if (radius.size() != env.size() || radius.size() < 2)
        throw InvalidArgument("front_position needs matching radius and envelope arrays of length >= 2");
    if (!(fraction > 0.0 && fraction < 1.0)) throw InvalidArgument("front fraction must lie in (0, 1)");
    const double top = env.maxCoeff();
    if (!(top > 0.0) || !std::isfinite(top)) throw NoFront("envelope is identically zero");

    std::vector<double> patterned;
    for (Index i = 0; i < env.size(); ++i)
        if (env(i) > 0.1 * top) patterned.push_back(env(i));
    auto mid = patterned.begin() + std::ptrdiff_t(patterned.size() / 2);
    std::nth_element(patterned.begin(), mid, patterned.end());
    const double threshold = fraction * *mid;

    if (env(0) >= threshold) return radius(0);
    for (Index i = 1; i < env.size(); ++i) {
        if (env(i) >= threshold) {
            const double f = (threshold - env(i - 1)) / (env(i) - env(i - 1));
            return radius(i - 1) + f * (radius(i) - radius(i - 1));
        }
    }
    throw NoFront("envelope never reaches the front threshold");
}

double front_position(const ScalarField& u, double fraction) {
    if (u.grid.geometry != Geometry::Annulus) throw InvalidArgument("front_position requires an annulus grid");
    return front_position(ring_radii(u.grid).head(u.grid.n_r), envelope(u), fraction);
}

std::vector<double> front_speed(std::span<const double> t, std::span<const double> R, int window) {
    const std::size_t n = t.size();
    if (R.size() != n) throw InvalidArgument("front_speed: t and R lengths differ");
    if (n < 3) throw InvalidArgument("front_speed needs at least 3 samples");
    if (window < 1) throw InvalidArgument("front_speed window must be positive");
    for (std::size_t k = 1; k < n; ++k)
        if (!(t[k] > t[k - 1])) throw InvalidArgument("front_speed: times must be strictly increasing");

    std::vector<double> raw(n);
    raw[0] = -(R[1] - R[0]) / (t[1] - t[0]);
    raw[n - 1] = -(R[n - 1] - R[n - 2]) / (t[n - 1] - t[n - 2]);
    for (std::size_t k = 1; k + 1 < n; ++k) raw[k] = -(R[k + 1] - R[k - 1]) / (t[k + 1] - t[k - 1]);

    const std::ptrdiff_t half = window / 2;
    std::vector<double> out(n);
    for (std::ptrdiff_t k = 0; k < std::ptrdiff_t(n); ++k) {
        const std::ptrdiff_t h = std::min({half, k, std::ptrdiff_t(n) - 1 - k});
        double s = 0.0;
        for (std::ptrdiff_t q = k - h; q <= k + h; ++q) s += raw[std::size_t(q)];
        out[std::size_t(k)] = s / double(2 * h + 1);
    }
    return out;
}

std::vector<double> front_speed(const FrontTrace& trace, int window) {
    std::vector<double> t, R;
    for (const auto& s : trace.samples) {
        t.push_back(s.t);
        R.push_back(s.R);
    }
    return front_speed(t, R, window);
}

double pulled_speed(double mu) {
    if (!(mu > 0.0)) throw InvalidArgument("pulled_speed requires mu > 0");
    // Unknowns k = kr + i ki.  With σ(k) = µ − (1 − k²)²:
    //   v = −Im σ'(k),  Re σ'(k) = 0,  Re σ(k) − ki v = 0.
    auto sigma = [mu](Complex k) { return mu - (1.0 - k * k) * (1.0 - k * k); };
    auto dsigma = [](Complex k) { return 4.0 * k * (1.0 - k * k); };
    auto residual = [&](const Eigen::Vector2d& x) {
        const Complex k(x(0), x(1));
        const double v = -dsigma(k).imag();
        return Eigen::Vector2d(dsigma(k).real(), sigma(k).real() - x(1) * v);
    };
    Eigen::Vector2d x(1.0, 0.5 * std::sqrt(mu));
    for (int it = 0; it < 100; ++it) {
        const Eigen::Vector2d f = residual(x);
        if (f.norm() < 1e-15) break;
        Eigen::Matrix2d J;
        for (int c = 0; c < 2; ++c) {
            const double h = 1e-7 * std::max(1e-3, std::abs(x(c)));
            Eigen::Vector2d xp = x, xm = x;
            xp(c) += h;
            xm(c) -= h;
            J.col(c) = (residual(xp) - residual(xm)) / (2.0 * h);
        }
        const Eigen::Vector2d dx = J.partialPivLu().solve(-f);
        x += dx;
        if (dx.norm() < 1e-15 * (1.0 + x.norm())) break;
    }
    if (!(x(1) > 0.0) || residual(x).norm() > 1e-10)
        throw NoConvergence("pulled_speed saddle point", 100, residual(x).norm(), 0.0);
    return -dsigma(Complex(x(0), x(1))).imag();
}

Periodicity log_periodicity(std::span<const double> log_radius, std::span<const double> nu, double phi,
                            double significance) {
    if (log_radius.size() != nu.size()) throw InvalidArgument("log_periodicity: length mismatch");
    if (!(phi > 1.0)) throw InvalidArgument("log_periodicity: phi must exceed 1");
    const double period0 = std::log(phi);
    std::vector<std::pair<double, double>> pts;
    for (std::size_t k = 0; k < nu.size(); ++k)
        if (std::isfinite(log_radius[k]) && std::isfinite(nu[k])) pts.emplace_back(log_radius[k], nu[k]);
    std::sort(pts.begin(), pts.end());
    if (pts.size() < 8 || pts.back().first - pts.front().first < 2.0 * period0)
        throw InvalidArgument("log_periodicity: samples must span at least two periods in ln R");

    const Index n = 256;
    const double x0 = pts.front().first;
    const double span = pts.back().first - x0;
    const double dx = span / double(n - 1);
    Eigen::ArrayXd x(n), y(n);
    std::size_t seg = 0;
    for (Index i = 0; i < n; ++i) {
        x(i) = x0 + dx * double(i);
        while (seg + 2 < pts.size() && pts[seg + 1].first < x(i)) ++seg;
        const auto& [xa, ya] = pts[seg];
        const auto& [xb, yb] = pts[seg + 1];
        const double f = xb > xa ? std::clamp((x(i) - xa) / (xb - xa), 0.0, 1.0) : 0.0;
        y(i) = ya + f * (yb - ya);
    }
    // Linear detrend.
    const double xm = x.mean(), ym = y.mean();
    const double slope = ((x - xm) * (y - ym)).sum() / (x - xm).square().sum();
    y = y - ym - slope * (x - xm);

    Periodicity out;
    const double var = y.square().mean();
    if (!(var > 1e-30 * (1.0 + ym * ym))) return out;

    // Unbiased autocorrelation up to half the record; the period is the first
    // peak after the first zero crossing.
    const Index max_lag = n / 2;
    Eigen::ArrayXd acf(max_lag + 1);
    for (Index l = 0; l <= max_lag; ++l)
        acf(l) = (y.head(n - l) * y.tail(n - l)).mean() / var;

    Index first_neg = 1;
    while (first_neg < max_lag && acf(first_neg) > 0.0) ++first_neg;
    Index best = -1;
    for (Index l = std::max<Index>(first_neg, 1); l < max_lag && best < 0; ++l)
        if (acf(l) >= acf(l - 1) && acf(l) >= acf(l + 1)) best = l;
    if (best < 0) return out;

    double shift = 0.0;
    const double den = acf(best - 1) - 2.0 * acf(best) + acf(best + 1);
    if (den < 0.0) shift = 0.5 * (acf(best - 1) - acf(best + 1)) / den;
    out.period = (double(best) + shift) * dx;
    out.peak = acf(best);
    out.deviation = std::abs(out.period - period0) / period0;
    out.significant = out.peak >= significance;
    return out;
}

Periodicity log_periodicity(const FrontTrace& trace, double phi, double significance) {
    std::vector<double> lr, nu;
    for (const auto& s : trace.samples) {
        if (!(s.R > 0.0)) continue;
        lr.push_back(std::log(s.R));
        nu.push_back(s.nu);
    }
    return log_periodicity(lr, nu, phi, significance);
}

}  // namespace phyllo
