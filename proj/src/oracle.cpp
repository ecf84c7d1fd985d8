#include "phyllo/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace phyllo {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double a) {
    a = std::remainder(a, kTwoPi);
    return a <= -kPi ? a + kTwoPi : a;
}

double unit_angle(double a) {
    a = std::fmod(a, kTwoPi);
    return a < 0.0 ? a + kTwoPi : a;
}

// d^(−exponent) evaluated from the squared distance.
Eigen::ArrayXd inverse_power(const Eigen::ArrayXd& d2, double exponent) {
    if (exponent == 1.0) return d2.rsqrt();
    if (exponent == 2.0) return d2.inverse();
    if (exponent == 3.0) return (d2 * d2.sqrt()).inverse();
    return (-0.5 * exponent * d2.log()).exp();
}

double repulsion(const PointConfig& c, double axial, double theta, double exponent) {
    const double R = c.radius();
    double s = 0.0;
    for (const auto& p : c.points) {
        const double a = R * wrap(theta - p.angle);
        const double z = axial - p.axial;
        s += std::pow(a * a + z * z, -0.5 * exponent);
    }
    return s;
}

}  // namespace

double PointConfig::distance(const CylinderPoint& a, const CylinderPoint& b) const {
    return std::hypot(radius() * wrap(a.angle - b.angle), a.axial - b.axial);
}

PointConfig place_points(int count, double rise_step, double exponent, const PointConfig& start,
                         const PlacementOptions& opts) {
    if (count < 1) throw InvalidArgument("oracle.count must be at least 1");
    if (!(rise_step > 0.0)) throw InvalidArgument("oracle.rise must be positive");
    if (!(exponent > 0.0)) throw InvalidArgument("oracle.exponent must be positive");
    if (!(start.circumference > 0.0)) throw InvalidArgument("circumference must be positive");
    if (opts.scan_samples < 16) throw InvalidArgument("scan_samples must be at least 16");
    if (opts.ramp_points < 0) throw InvalidArgument("ramp_points must be non-negative");

    PointConfig out = start;
    const double R = out.radius();
    const Index ns = opts.scan_samples;
    const double h = kTwoPi / double(ns);
    const Eigen::ArrayXd grid = Eigen::ArrayXd::LinSpaced(ns, 0.0, kTwoPi - h);

    int remaining = count;
    const bool ramp = out.points.empty() && opts.ramp_points > 0 && rise_step < out.circumference;
    if (out.points.empty()) {
        out.points.push_back({0.0, 0.0});
        --remaining;
    }
    auto rise_at = [&](std::size_t k) {
        if (!ramp || k >= std::size_t(opts.ramp_points)) return rise_step;
        return out.circumference * std::pow(rise_step / out.circumference, double(k) / double(opts.ramp_points));
    };
    Eigen::ArrayXd cost(ns);
    for (; remaining > 0; --remaining) {
        const double z = out.points.back().axial + rise_at(out.points.size());
        cost.setZero();
        for (const auto& p : out.points) {
            Eigen::ArrayXd d = grid - p.angle;
            d -= kTwoPi * (d / kTwoPi).round();
            const double dz = z - p.axial;
            cost += inverse_power(R * R * d.square() + dz * dz, exponent);
        }
        Index best = 0;
        cost.minCoeff(&best);

        // Golden-section search on the bracketing scan cell pair.
        double a = grid(best) - h, b = grid(best) + h;
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - g * (b - a), d = a + g * (b - a);
        double fc = repulsion(out, z, c, exponent), fd = repulsion(out, z, d, exponent);
        while (b - a > opts.refine_tol) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = repulsion(out, z, c, exponent);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = repulsion(out, z, d, exponent);
            }
        }
        out.points.push_back({z, unit_angle(0.5 * (a + b))});
    }
    return out;
}

std::vector<double> divergence_series(const PointConfig& config) {
    if (config.points.size() < 2) throw InvalidArgument("divergence_series needs at least 2 points");
    std::vector<double> out;
    out.reserve(config.points.size() - 1);
    for (std::size_t i = 1; i < config.points.size(); ++i)
        out.push_back(wrap(config.points[i].angle - config.points[i - 1].angle));
    return out;
}

PointConfig extract_maxima(const ScalarField& u, double threshold, double r_ref) {
    const GridSpec& g = u.grid;
    PointConfig out;
    const Index nr = g.n_r, nt = g.n_theta;
    const double top = u.values.maxCoeff();
    if (!(top > 0.0)) {
        out.circumference = kTwoPi * (r_ref > 0.0 ? r_ref : g.r_max);
        return out;
    }
    const double level = threshold * top;
    const double dr = g.dr(), dth = g.dtheta();
    for (Index i = 1; i + 1 < nr; ++i) {
        for (Index j = 0; j < nt; ++j) {
            const double c = u.values(i, j);
            if (c <= level) continue;
            bool strict = true;
            for (int di = -1; di <= 1 && strict; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    if (u.values(i + di, (j + dj + nt) % nt) >= c) {
                        strict = false;
                        break;
                    }
                }
            if (!strict) continue;
            auto offset = [](double m, double z, double p) {
                const double den = m - 2.0 * z + p;
                return den < 0.0 ? std::clamp(0.5 * (m - p) / den, -0.5, 0.5) : 0.0;
            };
            const double oi = offset(u.values(i - 1, j), c, u.values(i + 1, j));
            const double oj = offset(u.values(i, (j + nt - 1) % nt), c, u.values(i, (j + 1) % nt));
            out.points.push_back({g.radius(i) + oi * dr, unit_angle(g.angle(j) + oj * dth)});
        }
    }
    std::stable_sort(out.points.begin(), out.points.end(),
                     [](const CylinderPoint& a, const CylinderPoint& b) { return a.axial < b.axial; });
    double R = r_ref;
    if (!(R > 0.0)) R = out.points.empty() ? g.r_max : out.points[out.points.size() / 2].axial;
    out.circumference = kTwoPi * R;
    return out;
}

namespace {

struct Registration {
    const PointConfig& field;
    const PointConfig& ref;
    double cap;

    // Nearest-neighbour distance of each transformed field point.
    void distances(double rot, double shift, std::vector<double>& out) const {
        out.resize(field.points.size());
        for (std::size_t i = 0; i < field.points.size(); ++i) {
            const CylinderPoint q{field.points[i].axial + shift, field.points[i].angle + rot};
            double best = std::numeric_limits<double>::infinity();
            for (const auto& p : ref.points) best = std::min(best, ref.distance(q, p));
            out[i] = best;
        }
    }

    double objective(double rot, double shift) const {
        double s = 0.0;
        const double R = ref.radius();
        for (const auto& f : field.points) {
            const double z = f.axial + shift;
            double best = cap * cap;
            for (const auto& p : ref.points) {
                const double dz = z - p.axial;
                if (dz * dz >= best) continue;
                const double a = R * wrap(f.angle + rot - p.angle);
                best = std::min(best, a * a + dz * dz);
            }
            s += std::sqrt(best);
        }
        return s / double(field.points.size());
    }
};

}  // namespace

Comparison compare_maxima(const PointConfig& field, const PointConfig& reference) {
    if (field.points.empty() || reference.points.empty()) throw InvalidArgument("compare_maxima: empty input");
    if (std::abs(field.circumference - reference.circumference) > 1e-9 * reference.circumference)
        throw InvalidArgument("compare_maxima: configurations use different circumferences");

    const Registration reg{field, reference, kTwoPi};
    // Candidate registrations map one of a few central field points exactly
    // onto each reference point.
    std::vector<std::size_t> anchors;
    const std::size_t nf = field.points.size();
    for (std::size_t k : {nf / 2, nf / 4, (3 * nf) / 4})
        if (std::find(anchors.begin(), anchors.end(), k) == anchors.end()) anchors.push_back(k);

    double best_rot = 0.0, best_shift = 0.0;
    double best = reg.objective(0.0, 0.0);
    for (std::size_t a : anchors) {
        for (const auto& p : reference.points) {
            const double rot = wrap(p.angle - field.points[a].angle);
            const double shift = p.axial - field.points[a].axial;
            const double f = reg.objective(rot, shift);
            if (f < best) {
                best = f;
                best_rot = rot;
                best_shift = shift;
            }
        }
    }

    // Compass search refinement.
    double step_rot = 0.25 * kTwoPi / reference.circumference;  // a quarter unit of arc
    double step_z = 0.25;
    while (step_z > 1e-9) {
        bool improved = false;
        const std::array<std::array<double, 2>, 4> moves{{{step_rot, 0.0}, {-step_rot, 0.0}, {0.0, step_z}, {0.0, -step_z}}};
        for (const auto& mv : moves) {
            const double f = reg.objective(best_rot + mv[0], best_shift + mv[1]);
            if (f < best) {
                best = f;
                best_rot += mv[0];
                best_shift += mv[1];
                improved = true;
            }
        }
        if (!improved) {
            step_rot *= 0.5;
            step_z *= 0.5;
        }
    }

    std::vector<double> d;
    reg.distances(best_rot, best_shift, d);
    Comparison out;
    std::size_t matched = 0;
    double sum = 0.0;
    for (double x : d) {
        sum += x;
        if (x <= kPi) ++matched;
    }
    out.mean_distance = sum / double(d.size()) / kTwoPi;
    out.matched_fraction = double(matched) / double(d.size());
    out.rotation = wrap(best_rot);
    out.axial_shift = best_shift;
    return out;
}

}  // namespace phyllo
