// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned here.
//
// Exit status is the number of failed criteria, or 0 with --report.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "phyllo/pipeline.hpp"

using namespace phyllo;

namespace {

constexpr double kPi = std::numbers::pi;

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("criterion %2d [%s] %s: %s\n", id, pass ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = double(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxy += (x[k] - mx) * (y[k] - my);
        sxx += (x[k] - mx) * (x[k] - mx);
        syy += (y[k] - my) * (y[k] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

double variance(const std::vector<double>& x) {
    const double n = double(x.size());
    const double m = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double v = 0.0;
    for (double a : x) v += (a - m) * (a - m);
    return v / n;
}

const ModeProfile& profile(const Analysis& a, int m) {
    for (const auto& p : a.profiles)
        if (p.m == m) return p;
    throw InvalidArgument("missing mode");
}

double peak_radius(const ModeProfile& p) {
    Index i = 0;
    p.amplitude.maxCoeff(&i);
    return p.radius(i);
}

// Front samples of the final inward sweep through [lo, hi]: everything after
// the last sample above hi and before the first one below lo.
FrontTrace propagation(const FrontTrace& f, double lo, double hi) {
    std::size_t start = 0;
    for (std::size_t k = 0; k < f.samples.size(); ++k)
        if (f.samples[k].R > hi) start = k + 1;
    FrontTrace out;
    for (std::size_t k = start; k < f.samples.size() && f.samples[k].R >= lo; ++k)
        if (std::isfinite(f.samples[k].nu)) out.samples.push_back(f.samples[k]);
    return out;
}

// Linear interpolation of ν at radius r from a trace whose R decreases.
double nu_at(const FrontTrace& f, double r) {
    for (std::size_t k = 1; k < f.samples.size(); ++k) {
        const auto& a = f.samples[k - 1];
        const auto& b = f.samples[k];
        if ((a.R - r) * (b.R - r) <= 0.0 && a.R != b.R) return a.nu + (r - a.R) / (b.R - a.R) * (b.nu - a.nu);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

ScalarField random_field(const GridSpec& g, std::mt19937_64& rng, double amp, const Row<double>* ghost = nullptr) {
    std::uniform_real_distribution<double> d(-amp, amp);
    ScalarField u(g);
    for (Index i = 0; i < g.n_r; ++i)
        for (Index j = 0; j < g.n_theta; ++j) u.values(i, j) = d(rng);
    for (Index j = 0; j < g.n_theta; ++j) u.ghost(j) = d(rng);
    if (ghost) u.ghost = *ghost;
    return u;
}

// ---------------------------------------------------------------------------

void chain_rule() {
    const GridSpec g = make_grid(5.0, 12.0, 29, 32);
    const ModelParams p;
    std::mt19937_64 rng(7);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const ScalarField u = random_field(g, rng, 0.5);
        ScalarField v = random_field(g, rng, 0.5, &u.ghost);
        v.values.row(g.n_r - 1) = u.values.row(g.n_r - 1);  // shared pinned ring
        const double eu = energy(u, p), ev = energy(v, p);
        ScalarField diff(g);
        diff.values = v.values - u.values;
        const double pred = inner(discrete_gradient(u, v, p), diff);
        const double scale = std::max({std::abs(eu), std::abs(ev), std::abs(ev - eu)});
        worst = std::max(worst, std::abs(ev - eu - pred) / scale);
    }
    report(2, "discrete chain rule", worst <= 1e-12, fmt("100 random pairs, worst relative error %.2e (tol 1e-12)", worst));
}

void dispersion() {
    // Strip of metric radius 10: mode m has wavenumber m/10.
    const GridSpec g = make_strip(20.0 * kPi, 256);
    ModelParams p;
    p.dt = 0.1;
    p.solver_tol = 1e-16;
    double worst = 0.0;
    std::string detail;
    for (int m : {8, 9, 10, 11, 12}) {
        const double k = m / 10.0;
        const double A0 = 1e-6;
        ScalarField u = sample(g, [&](double, double th) { return A0 * std::cos(m * th); });
        const ScalarField v = step(u, p).field;
        const Spectrum c = forward_rings(v.values);
        const double A1 = 2.0 * std::abs(c(0, m));
        const double rate = std::log(A1 / A0) / p.dt;
        const double sigma = growth_rate(p.mu, k);
        const double err = std::abs(rate - sigma) / std::abs(sigma);
        worst = std::max(worst, err);
        detail += fmt(" k=%.1f:%.4g/%.4g", k, rate, sigma);
    }
    report(3, "linear dispersion", worst <= 0.02, fmt("worst relative error %.2e (tol 2%%);%s", worst, detail.c_str()));
}

void roll_amplitude() {
    const GridSpec g = make_strip(20.0 * kPi, 128);
    ModelParams p;
    p.beta = 0.0;
    p.dt = 5.0;
    ScalarField u = sample(g, [](double, double th) { return 0.01 * std::cos(10.0 * th); });
    const EvolveResult r = evolve(u, p, 20000.0);
    const Spectrum c = forward_rings(r.field.values);
    const double A = 2.0 * std::abs(c(0, 10));
    const double ref = std::sqrt(4.0 * p.mu / 3.0);
    const double err = std::abs(A - ref) / ref;
    report(4, "roll amplitude", err <= 0.05, fmt("A = %.6f vs sqrt(4mu/3) = %.6f, relative error %.2e (tol 5%%)", A, ref, err));
}

void packing_classics(const Analysis& desk) {
    const double hex = packing_efficiency(kPi, kPi / std::sqrt(3.0));
    const double sq = packing_efficiency(kPi, kPi);
    double worst_sim = 0.0;
    for (const auto& row : desk.lattice) worst_sim = std::max(worst_sim, row.metrics.eta);
    const double bound = kPi / std::sqrt(12.0);
    const bool pass = std::abs(hex - bound) <= 1e-6 && std::abs(sq - kPi / 4.0) <= 1e-6 && worst_sim <= bound + 1e-12;
    report(10, "packing efficiency", pass,
           fmt("hexagonal %.9f (pi/sqrt12 = %.9f), square %.9f (pi/4 = %.9f), simulated max %.6f over %zu radii", hex,
               bound, sq, kPi / 4.0, worst_sim, desk.lattice.size()));
}

// ---------------------------------------------------------------------------

struct Desk {
    RunConfig cfg;
    RunOutput run;
    Analysis analysis;
    double seconds = 0.0;
};

Desk run_desk(const std::string& name) {
    Desk d;
    d.cfg = preset(name);
    RunHooks hooks;
    hooks.write_files = false;
    const auto t0 = std::chrono::steady_clock::now();
    d.run = run_simulation(d.cfg, hooks);
    d.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    d.analysis = analyze_field(d.run.field, d.cfg.params);
    return d;
}

void energy_dissipation(const Desk& d) {
    double worst = -std::numeric_limits<double>::infinity();
    bool ok = true;
    const auto& e = d.run.energy;
    for (std::size_t k = 1; k < e.size(); ++k) {
        const double rise = e[k].energy - e[k - 1].energy;
        const double allowed = 1e-10 * (1.0 + std::abs(e[k - 1].energy));
        worst = std::max(worst, rise / (1.0 + std::abs(e[k - 1].energy)));
        if (rise > allowed) ok = false;
    }
    report(1, "energy dissipation", ok,
           fmt("%zu accepted steps to t = %.1f in %.0f s, largest normalised change %.3e (tol +1e-10), E: %.6g -> %.6g",
               e.size() - 1, d.run.t, d.seconds, worst, e.front().energy, e.back().energy));
}

std::vector<int> fibonacci_closure(const std::vector<int>& s, int m_max) {
    std::set<int> out(s.begin(), s.end());
    if (s.size() < 2) return {out.begin(), out.end()};
    int a = s[0], b = s[1];
    while (b - a >= 1 && a >= 1) {
        const int prev = b - a;
        out.insert(prev);
        b = a;
        a = prev;
        if (a == b) break;
    }
    a = s[s.size() - 2];
    b = s.back();
    while (a + b <= m_max) {
        out.insert(a + b);
        const int next = a + b;
        a = b;
        b = next;
    }
    return {out.begin(), out.end()};
}

void fibonacci_selection(const Desk& d, std::vector<int>& interior) {
    const Analysis& a = d.analysis;
    const std::vector<int>& S = a.sequence;
    const bool fib = is_fibonacci_like(S);
    const std::vector<int> descending{21, 13, 8, 5};
    bool present = true;
    for (int m : descending) present = present && std::count(S.begin(), S.end(), m) == 1;
    bool ordered = present;
    std::string radii;
    for (std::size_t k = 0; k < descending.size(); ++k) {
        const double r = peak_radius(profile(a, descending[k]));
        radii += fmt(" r*(%d)=%.1f", descending[k], r);
        if (k > 0 && !(r < peak_radius(profile(a, descending[k - 1])))) ordered = false;
    }

    // Interior members: skip the outermost (seeded rim) and take the next three.
    interior.clear();
    for (auto it = S.rbegin() + (S.empty() ? 0 : 1); it != S.rend() && interior.size() < 3; ++it) interior.push_back(*it);
    double ref = 0.0;
    for (int m : interior) ref += a.maxima.at(m);
    ref /= std::max<std::size_t>(1, interior.size());

    const int m_max = a.maxima.rbegin()->first;
    const std::vector<int> members = fibonacci_closure(S, m_max);
    std::set<int> allowed(members.begin(), members.end());
    for (int m : members) allowed.insert(2 * m);
    for (std::size_t j = 2; j < members.size(); ++j) allowed.insert(members[j - 2] + members[j]);
    int worst_m = -1;
    double worst = 0.0;
    for (const auto& [m, v] : a.maxima) {
        if (m < 1 || allowed.count(m)) continue;
        if (v > worst) {
            worst = v;
            worst_m = m;
        }
    }
    std::string seq;
    for (int m : S) seq += fmt(" %d", m);
    const bool pass = fib && ordered && worst < 0.25 * ref;
    report(5, "Fibonacci selection", pass,
           fmt("modes above 50%% of max:%s (Fibonacci-like: %s);%s; largest other mode m=%d at %.3f = %.1f%% of "
               "Fibonacci maxima (tol 25%%)",
               seq.c_str(), fib ? "yes" : "no", radii.c_str(), worst_m, worst, 100.0 * worst / ref));
}

void fibonacci_equality(const Desk& d, const std::vector<int>& interior) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    std::string detail;
    for (int m : interior) {
        const double v = d.analysis.maxima.at(m);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        detail += fmt(" a(%d)=%.4f", m, v);
    }
    const double spread = (hi - lo) / hi;
    report(6, "Fibonacci maxima equality", interior.size() == 3 && spread <= 0.10,
           fmt("%s; max pairwise spread %.1f%% (tol 10%%)", detail.c_str(), 100.0 * spread));
}

void self_similarity(const Desk& d, const std::vector<int>& interior) {
    // Consecutive interior pairs (m_j, m_{j+1}); outer radii kept one window
    // inside the pinned rim.
    std::vector<int> seq(interior.rbegin(), interior.rend());
    const double phi = GoldenConstants::phi;
    const double r_hi = (d.cfg.grid.r_max - 4.0 * kPi) / phi;
    const double r_lo = d.analysis.front_radius + 2.0 * kPi;
    double worst_a = 0.0, worst_l = 0.0;
    std::string detail;
    for (std::size_t j = 0; j + 1 < seq.size(); ++j) {
        const SimilarityResidual s =
            self_similarity_residual(profile(d.analysis, seq[j]), profile(d.analysis, seq[j + 1]), phi, {r_lo, r_hi});
        worst_a = std::max(worst_a, s.amplitude);
        worst_l = std::max(worst_l, s.wavenumber);
        detail += fmt(" (%d->%d: amp %.3f, ell %.3f, %ld radii)", seq[j], seq[j + 1], s.amplitude, s.wavenumber,
                      long(s.samples));
    }
    report(7, "self-similarity", worst_a < 0.10 && worst_l <= 0.10,
           fmt("r in [%.1f, %.1f]%s (tol 10%%)", r_lo, r_hi, detail.c_str()));
}

void golden_angle(const Desk& d) {
    const GridSpec& g = d.cfg.grid;
    const double r_third = g.r_min + (g.r_max - g.r_min) / 3.0;
    const double ga = GoldenConstants::golden_angle;
    double worst = 0.0;
    int n = 0;
    for (const auto& row : d.analysis.lattice) {
        if (row.r > r_third) continue;
        worst = std::max(worst, std::abs(std::abs(row.metrics.delta) - ga) / ga);
        ++n;
    }
    report(8, "golden angle", n > 0 && worst <= 0.02,
           fmt("%d radii in r <= %.2f, worst |delta| deviation %.3f%% from %.5f (tol 2%%)", n, r_third, 100.0 * worst, ga));
}

void van_iterson(const Desk& d) {
    int ok = 0, n = 0;
    double worst = 0.0;
    for (const auto& row : d.analysis.lattice) {
        const auto& branch = d.analysis.branches.at({row.m, row.n});
        const double dist = distance_to_branch(branch, row.metrics.delta, row.metrics.rho);
        const double tol = 0.05 * (1.0 + row.metrics.rho);
        worst = std::max(worst, dist / tol);
        ++n;
        if (dist <= tol) ++ok;
    }
    const double frac = n ? double(ok) / n : 0.0;
    report(9, "van Iterson proximity", frac >= 0.9,
           fmt("%d of %d radii within 0.05(1+rho) of their pair's rhombic branch (%.1f%%, need 90%%); worst "
               "distance/tol %.2f",
               ok, n, 100.0 * frac, worst));
}

void fig5_correlations(const Desk& d, const FrontTrace& prop) {
    std::vector<double> eps, eta, nu_eta, nu;
    for (const auto& row : d.analysis.lattice) {
        eps.push_back(row.metrics.epsilon);
        eta.push_back(row.metrics.eta);
        const double v = nu_at(prop, row.r);
        if (std::isfinite(v)) {
            nu.push_back(v);
            nu_eta.push_back(row.metrics.eta);
        }
    }
    const double c1 = eps.size() > 2 ? pearson(eps, eta) : 0.0;
    const double c2 = nu.size() > 2 ? pearson(nu, nu_eta) : 0.0;
    // Diagnostic only: ε with its linear trend in r removed.
    std::vector<double> r, res;
    for (const auto& row : d.analysis.lattice) r.push_back(row.r);
    double c3 = 0.0;
    if (eps.size() > 2) {
        const double slope = pearson(r, eps) * std::sqrt(variance(eps) / variance(r));
        for (std::size_t k = 0; k < eps.size(); ++k) res.push_back(eps[k] - slope * r[k]);
        c3 = pearson(res, eta);
    }
    report(11, "energy, packing and speed correlations", c1 < -0.5 && c2 > 0.5,
           fmt("Pearson(eps, eta) = %.3f over %zu radii (need < -0.5); Pearson(nu, eta) = %.3f over %zu radii (need > 0.5); "
               "detrended Pearson(eps, eta) = %.3f (not scored)",
               c1, eps.size(), c2, nu.size(), c3));
}

void pushed_front(const Desk& d, const FrontTrace& prop) {
    const double v_star = pulled_speed(d.cfg.params.mu);
    const auto& s = prop.samples;
    const double mean = s.size() >= 2 ? (s.front().R - s.back().R) / (s.back().t - s.front().t) : 0.0;
    report(12, "pushed front", mean >= 1.1 * v_star,
           fmt("time-averaged nu = %.4f over R in [%.1f, %.1f], pulled speed %.4f, ratio %.2f (need >= 1.10)", mean,
               s.empty() ? 0.0 : s.back().R, s.empty() ? 0.0 : s.front().R, v_star, mean / v_star));
}

void phi_periodicity(const Desk& d, const FrontTrace& prop, const char* label) {
    try {
        const Periodicity p = log_periodicity(prop, GoldenConstants::phi);
        report(13, "phi-periodicity of nu", p.significant && p.deviation <= 0.10,
               fmt("%s: period %.4f in ln R vs ln(phi) = %.4f (deviation %.1f%%, tol 10%%), autocorrelation peak %.2f, "
                   "span ln R in [%.2f, %.2f]",
                   label, p.period, GoldenConstants::ln_phi, 100.0 * p.deviation, p.peak,
                   std::log(prop.samples.back().R), std::log(prop.samples.front().R)));
    } catch (const InvalidArgument& e) {
        report(13, "phi-periodicity of nu", false, fmt("%s: %s", label, e.what()));
    }
    (void)d;
}

void oracle_agreement(const Desk& d) {
    const PointConfig oracle = place_points(500, 0.02, 3.0);
    const auto div = divergence_series(oracle);
    double dev = 0.0;
    for (std::size_t k = div.size() - 50; k < div.size(); ++k)
        dev = std::max(dev, std::abs(std::abs(div[k]) - GoldenConstants::golden_angle));

    // Local chart around r_ref: PDE maxima within one wavelength, oracle run
    // on the same circumference with the locally measured rise.
    const double r_ref = 0.5 * (d.analysis.front_radius + d.cfg.seed.r0);
    const LocalLattice lat = local_lattice(d.analysis.profiles, r_ref);
    const RiseDivergence rd = rise_divergence(lat);
    const PointConfig all = extract_maxima(d.run.field, 0.25, r_ref);
    PointConfig band;
    band.circumference = all.circumference;
    for (const auto& p : all.points)
        if (std::abs(p.axial - r_ref) <= kPi) band.points.push_back(p);
    PointConfig start;
    start.circumference = 2.0 * kPi * r_ref;
    const double rise = rd.rho * r_ref;
    const int count = 300 + int(std::ceil(4.0 * kPi / rise));
    const PointConfig ref = place_points(count, rise, 3.0, start);
    PointConfig tail;
    tail.circumference = ref.circumference;
    const double z_end = ref.points.back().axial;
    for (const auto& p : ref.points)
        if (p.axial >= z_end - 4.0 * kPi) tail.points.push_back(p);
    const Comparison c = compare_maxima(band, tail);
    const bool pass = dev <= 0.5 * kPi / 180.0 && c.mean_distance < 0.25 && c.matched_fraction > 0.9;
    report(14, "oracle convergence and agreement", pass,
           fmt("oracle tail max |delta - golden| = %.5f rad (tol 0.00873); PDE maxima at r = %.1f +- pi (%zu points, "
               "rho %.5f, delta %.4f) vs oracle: mean distance %.3f wavelengths (need < 0.25), matched %.3f (need > 0.9)",
               dev, r_ref, band.points.size(), rd.rho, rd.delta, c.mean_distance, c.matched_fraction));
}

// Every consecutive triad of the dominant sequence, one wavelength clear of
// the front and the pinned rim.  The verdict counts radii where all three
// members are above the amplitude floor; the same statistic restricted to
// radii where all three exceed half the global max is reported alongside.
void triad(const Desk& d) {
    const Analysis& a = d.analysis;
    double top = 0.0;
    for (const auto& [m, v] : a.maxima)
        if (m >= 1) top = std::max(top, v);
    const double lo = a.front_radius + 2.0 * kPi, hi = d.cfg.grid.r_max - 2.0 * kPi;
    double worst = 0.0, worst_strong = 0.0;
    int n = 0;
    std::string detail;
    const auto& S = a.sequence;
    for (std::size_t j = 0; j + 2 < S.size(); ++j) {
        const ModeProfile& pm = profile(a, S[j]);
        const ModeProfile& pn = profile(a, S[j + 1]);
        const ModeProfile& ps = profile(a, S[j + 2]);
        double w = 0.0, ws = 0.0;
        int k = 0;
        for (Index i = 0; i < pm.size(); ++i) {
            const double r = pm.radius(i);
            const auto u = std::size_t(i);
            if (r < lo || r > hi || !pm.valid[u] || !pn.valid[u] || !ps.valid[u]) continue;
            const double mis =
                std::abs(pm.radial_wavenumber(i) + pn.radial_wavenumber(i) - ps.radial_wavenumber(i));
            if (!std::isfinite(mis)) continue;
            w = std::max(w, mis);
            if (std::min({pm.amplitude(i), pn.amplitude(i), ps.amplitude(i)}) >= 0.5 * top) ws = std::max(ws, mis);
            ++k;
        }
        if (k == 0) continue;
        detail += fmt(" (%d,%d,%d): %d radii, max %.3f (strong %.3f);", S[j], S[j + 1], S[j + 2], k, w, ws);
        worst = std::max(worst, w);
        worst_strong = std::max(worst_strong, ws);
        n += k;
    }
    report(15, "triad resonance", n > 0 && worst <= 0.1,
           fmt("r in [%.1f, %.1f]%s max |l_m + l_n - l_(m+n)| = %.4f (tol 0.1), strong-only %.4f", lo, hi,
               detail.c_str(), worst, worst_strong));
}

}  // namespace

int main(int argc, char** argv) {
    // --report: evaluate every criterion and exit 0; FAIL lines remain in the output.
    const bool report_only = argc > 1 && std::string(argv[1]) == "--report";
    std::printf("acceptance suite\n");
    const Desk desk = run_desk("desk-13-21");
    const double lo = desk.cfg.grid.r_min + 2.0 * kPi;
    const double hi = desk.cfg.seed.r0 - 2.0 * kPi;
    const FrontTrace prop = propagation(desk.run.front, lo, hi);

    energy_dissipation(desk);
    chain_rule();
    dispersion();
    roll_amplitude();
    std::vector<int> interior;
    fibonacci_selection(desk, interior);
    fibonacci_equality(desk, interior);
    self_similarity(desk, interior);
    golden_angle(desk);
    van_iterson(desk);
    packing_classics(desk.analysis);
    fig5_correlations(desk, prop);
    pushed_front(desk, prop);

    bool span_ok = false;
    try {
        log_periodicity(prop, GoldenConstants::phi);
        span_ok = true;
    } catch (const InvalidArgument&) {
    }
    if (span_ok) {
        phi_periodicity(desk, prop, "desk-13-21");
    } else {
        const Desk wide = run_desk("desk-21-34");
        const FrontTrace p2 =
            propagation(wide.run.front, wide.cfg.grid.r_min + 2.0 * kPi, wide.cfg.seed.r0 - 2.0 * kPi);
        phi_periodicity(wide, p2, fmt("desk-21-34 (%.0f s)", wide.seconds).c_str());
    }
    oracle_agreement(desk);
    triad(desk);

    std::printf("acceptance summary: %d of 15 criteria failed\n", failures);
    return report_only ? 0 : failures;
}
