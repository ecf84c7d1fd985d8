#include "phyllo/modes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace phyllo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::vector<ModeProfile> decompose(const ScalarField& u, int m_max, const DecomposeOptions& opts) {
    const GridSpec& g = u.grid;
    if (m_max < 0 || m_max >= g.n_theta / 2)
        throw InvalidArgument("m_max " + std::to_string(m_max) + " must be below n_theta/2 = " +
                              std::to_string(g.n_theta / 2));
    const Spectrum c = forward_rings(u.values);
    const Index n = g.n_r;

    std::vector<ModeProfile> out(std::size_t(m_max + 1));
    double global_max = 0.0;
    for (int m = 0; m <= m_max; ++m) {
        ModeProfile& p = out[std::size_t(m)];
        p.m = m;
        p.radius.resize(n);
        p.amplitude.resize(n);
        p.phase.resize(n);
        for (Index i = 0; i < n; ++i) {
            p.radius(i) = g.radius(i);
            const Complex cm = c(i, m);
            p.amplitude(i) = (m == 0 ? 1.0 : 2.0) * std::abs(cm);
            p.phase(i) = std::arg(cm);
        }
        global_max = std::max(global_max, p.amplitude.maxCoeff());
    }

    const double floor = opts.amplitude_floor * global_max;
    for (auto& p : out) {
        p.valid.assign(std::size_t(n), false);
        for (Index i = 0; i < n; ++i) p.valid[std::size_t(i)] = global_max > 0.0 && p.amplitude(i) > floor;
        // Unwrap from the rim inward, relative to the nearest valid outer ring.
        double previous = kNaN;
        for (Index i = n - 1; i >= 0; --i) {
            if (!p.valid[std::size_t(i)]) continue;
            if (std::isfinite(previous)) {
                const double two_pi = 2.0 * std::numbers::pi;
                p.phase(i) -= two_pi * std::round((p.phase(i) - previous) / two_pi);
            }
            previous = p.phase(i);
        }
        p.radial_wavenumber = radial_wavenumber(p);
    }
    return out;
}

Eigen::ArrayXd radial_wavenumber(const ModeProfile& p) {
    const Index n = p.size();
    Eigen::ArrayXd ell = Eigen::ArrayXd::Constant(n, kNaN);
    if (n < 2) return ell;
    const double h = p.radius(1) - p.radius(0);
    auto ok = [&](Index i) { return i >= 0 && i < n && p.valid[std::size_t(i)]; };
    for (Index i = 0; i < n; ++i) {
        if (!ok(i)) continue;
        if (ok(i - 1) && ok(i + 1))
            ell(i) = -(p.phase(i + 1) - p.phase(i - 1)) / (2.0 * h);
        else if (ok(i + 1))
            ell(i) = -(p.phase(i + 1) - p.phase(i)) / h;
        else if (ok(i - 1))
            ell(i) = -(p.phase(i) - p.phase(i - 1)) / h;
    }
    return ell;
}

std::map<int, double> max_amplitudes(const std::vector<ModeProfile>& profiles) {
    std::map<int, double> out;
    for (const auto& p : profiles) out[p.m] = p.size() > 0 ? p.amplitude.maxCoeff() : 0.0;
    return out;
}

namespace {

const ModeProfile& find_mode(const std::vector<ModeProfile>& profiles, int m) {
    for (const auto& p : profiles)
        if (p.m == m) return p;
    throw InvalidArgument("mode " + std::to_string(m) + " is not present in the decomposition");
}

}  // namespace

std::vector<CurvePoint> invariant_amplitude_curve(const std::vector<ModeProfile>& profiles,
                                                  const std::vector<int>& sequence) {
    std::vector<CurvePoint> out;
    for (std::size_t j = 0; j < sequence.size(); ++j) {
        const ModeProfile& p = find_mode(profiles, sequence[j]);
        const double scale = std::pow(GoldenConstants::phi, double(j));
        for (Index i = 0; i < p.size(); ++i) out.push_back({p.radius(i) / scale, p.amplitude(i), int(j)});
    }
    return out;
}

double interpolate(const Eigen::ArrayXd& radius, const Eigen::ArrayXd& values, double r) {
    const Index n = radius.size();
    if (n == 0 || r < radius(0) - 1e-12 || r > radius(n - 1) + 1e-12) return kNaN;
    if (n == 1) return values(0);
    const double h = radius(1) - radius(0);
    const double x = std::clamp((r - radius(0)) / h, 0.0, double(n - 1));
    const Index i = std::min<Index>(Index(std::floor(x)), n - 2);
    const double f = x - double(i);
    return (1.0 - f) * values(i) + f * values(i + 1);
}

Index nearest_ring(const ModeProfile& p, double r) {
    const Index n = p.size();
    if (n < 2) return 0;
    const double h = p.radius(1) - p.radius(0);
    return std::clamp<Index>(Index(std::llround((r - p.radius(0)) / h)), 0, n - 1);
}

SimilarityResidual self_similarity_residual(const ModeProfile& inner, const ModeProfile& outer, double phi,
                                            std::pair<double, double> restrict_to) {
    double da = 0.0, na = 0.0, dl = 0.0, nl = 0.0;
    Index count = 0;
    Index count_l = 0;
    for (Index i = 0; i < inner.size(); ++i) {
        const double r = inner.radius(i);
        if (restrict_to.second > restrict_to.first && (r < restrict_to.first || r > restrict_to.second)) continue;
        if (!inner.valid[std::size_t(i)]) continue;
        const double a_out = interpolate(outer.radius, outer.amplitude, phi * r);
        if (!std::isfinite(a_out)) continue;
        const Index k = nearest_ring(outer, phi * r);
        if (!outer.valid[std::size_t(k)]) continue;
        da += (a_out - inner.amplitude(i)) * (a_out - inner.amplitude(i));
        na += inner.amplitude(i) * inner.amplitude(i);
        ++count;
        const double l_in = inner.radial_wavenumber(i);
        const double l_out = interpolate(outer.radius, outer.radial_wavenumber, phi * r);
        if (std::isfinite(l_in) && std::isfinite(l_out)) {
            dl += (l_out + l_in) * (l_out + l_in);
            nl += l_in * l_in;
            ++count_l;
        }
    }
    if (count == 0 || na == 0.0)
        throw NoOverlap("modes " + std::to_string(inner.m) + " and " + std::to_string(outer.m) +
                        " have no overlapping valid radii after scaling by phi");
    return {std::sqrt(da / na), count_l > 0 && nl > 0.0 ? std::sqrt(dl / nl) : kNaN, count};
}

SimilarityResidual self_similarity_residual(const std::vector<ModeProfile>& profiles,
                                            const std::vector<int>& sequence, std::size_t j, double phi) {
    if (j + 1 >= sequence.size()) throw InvalidArgument("sequence index out of range");
    return self_similarity_residual(find_mode(profiles, sequence[j]), find_mode(profiles, sequence[j + 1]), phi);
}

std::pair<int, int> dominant_pair(const std::vector<ModeProfile>& profiles, double r) {
    std::vector<std::pair<double, int>> ranked;
    for (const auto& p : profiles) {
        if (p.m < 1 || p.size() == 0) continue;
        const Index i = nearest_ring(p, r);
        if (p.valid[std::size_t(i)]) ranked.emplace_back(p.amplitude(i), p.m);
    }
    if (ranked.size() < 2)
        throw InvalidArgument("fewer than two active modes at r = " + std::to_string(r));
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    const int first = ranked[0].second;
    const double second_amp = ranked[1].first;
    int best = ranked[1].second;
    bool best_coprime = std::gcd(first, best) == 1;
    for (std::size_t k = 2; k < ranked.size() && ranked[k].first >= 0.99 * second_amp; ++k) {
        const int c = ranked[k].second;
        const bool coprime = std::gcd(first, c) == 1;
        if ((coprime && !best_coprime) || (coprime == best_coprime && c < best)) {
            best = c;
            best_coprime = coprime;
        }
    }
    return {std::min(first, best), std::max(first, best)};
}

std::vector<int> dominant_modes(const std::map<int, double>& maxima, double fraction, int m_min) {
    double top = 0.0;
    for (const auto& [m, a] : maxima)
        if (m >= m_min) top = std::max(top, a);
    std::vector<int> out;
    for (const auto& [m, a] : maxima)
        if (m >= m_min && a > fraction * top) out.push_back(m);
    return out;
}

bool is_fibonacci_like(const std::vector<int>& seq) {
    if (seq.size() < 3) return false;
    for (std::size_t i = 2; i < seq.size(); ++i)
        if (seq[i] != seq[i - 1] + seq[i - 2]) return false;
    return true;
}

}  // namespace phyllo
