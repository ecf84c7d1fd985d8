#include <doctest.h>

#include <cmath>

#include "phyllo/modes.hpp"
#include "phyllo/seeding.hpp"

using namespace phyllo;

TEST_CASE("seed wavenumbers at the seeding radius") {
    const TriadWavenumbers w = parastichy_wavevectors(13, 21, 34.0);
    CHECK(w.ell_m == doctest::Approx(std::sqrt(1.0 - 169.0 / 1156.0)).epsilon(1e-14));
    CHECK(w.ell_m == doctest::Approx(0.9239).epsilon(1e-3));
    CHECK(w.ell_n == doctest::Approx(-std::sqrt(1.0 - 441.0 / 1156.0)).epsilon(1e-14));
    CHECK(w.ell_sum == doctest::Approx(w.ell_m + w.ell_n));
    // |k| = 1 for both members.
    CHECK(w.ell_m * w.ell_m + 169.0 / 1156.0 == doctest::Approx(1.0));
    CHECK_THROWS_AS(parastichy_wavevectors(13, 21, 20.0), InvalidArgument);
}

TEST_CASE("seed validation") {
    ParastichySeed s;
    s.n = 26;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    s.n = 21;
    s.resonance_sum = 1.0;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    s.resonance_sum = std::numbers::pi;
    CHECK_NOTHROW(s.validate());
}

TEST_CASE("seeded field is zero inside the band and decomposes into the triad") {
    const GridSpec g = make_grid(5.0, 40.0, 141, 256);
    ParastichySeed s;
    s.band_width = 6.0;
    const ScalarField u = seed_field(g, s);
    for (Index i = 0; i < g.n_r; ++i)
        if (g.radius(i) < s.r0 - 1e-9) CHECK(u.values.row(i).abs().maxCoeff() == 0.0);
    const auto prof = decompose(u, 60);
    const auto maxima = max_amplitudes(prof);
    const auto seq = dominant_modes(maxima, 0.5);
    CHECK(seq == std::vector<int>{13, 21, 34});
    // Past the taper the amplitude is the seed amplitude.
    const Index i = nearest_ring(prof[13], 39.0);
    CHECK(prof[13].amplitude(i) == doctest::Approx(s.amplitude).epsilon(1e-9));
    const TriadWavenumbers w = parastichy_wavevectors(13, 21, 34.0);
    CHECK(prof[21].radial_wavenumber(i) == doctest::Approx(w.ell_n).epsilon(1e-3));
}

TEST_CASE("decompose recovers amplitude, phase and radial wavenumber") {
    const GridSpec g = make_grid(10.0, 30.0, 401, 64);
    const double ell = 0.8;
    const ScalarField u = sample(g, [&](double r, double th) {
        return 0.2 + 0.5 * std::cos(3.0 * th - ell * r + 0.4) + 0.1 * std::cos(7.0 * th);
    });
    const auto prof = decompose(u, 10);
    const Index i = nearest_ring(prof[3], 20.0);
    CHECK(prof[0].amplitude(i) == doctest::Approx(0.2));
    CHECK(prof[3].amplitude(i) == doctest::Approx(0.5));
    CHECK(prof[7].amplitude(i) == doctest::Approx(0.1));
    CHECK(prof[3].radial_wavenumber(i) == doctest::Approx(ell).epsilon(1e-3));
    const double want = std::remainder(-ell * prof[3].radius(i) + 0.4, 2.0 * std::numbers::pi);
    CHECK(std::remainder(prof[3].phase(i) - want, 2.0 * std::numbers::pi) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK_FALSE(prof[5].valid[std::size_t(i)]);
    CHECK(std::isnan(prof[5].radial_wavenumber(i)));

    // Parseval: a_0² + Σ a_m²/2 equals the ring mean of u².
    double sum = prof[0].amplitude(i) * prof[0].amplitude(i);
    for (int m = 1; m <= 10; ++m) sum += 0.5 * prof[std::size_t(m)].amplitude(i) * prof[std::size_t(m)].amplitude(i);
    CHECK(sum == doctest::Approx(u.values.row(i).square().mean()).epsilon(1e-12));
}

TEST_CASE("Fibonacci-like sequences") {
    CHECK(is_fibonacci_like({5, 8, 13, 21}));
    CHECK(is_fibonacci_like({4, 7, 11}));
    CHECK_FALSE(is_fibonacci_like({5, 8, 12}));
    const std::map<int, double> mx{{1, 0.1}, {5, 0.6}, {8, 1.0}, {13, 0.9}, {20, 0.4}};
    CHECK(dominant_modes(mx, 0.5) == std::vector<int>{5, 8, 13});
}

TEST_CASE("self-similarity residual vanishes for exact scaling") {
    ModeProfile a, b;
    a.m = 8;
    b.m = 13;
    const Index n = 200;
    a.radius = b.radius = Eigen::ArrayXd::LinSpaced(n, 5.0, 40.0);
    a.amplitude.resize(n);
    b.amplitude.resize(n);
    a.radial_wavenumber.resize(n);
    b.radial_wavenumber.resize(n);
    const double phi = GoldenConstants::phi;
    auto f = [](double r) { return std::exp(-(r - 12.0) * (r - 12.0) / 8.0); };
    auto l = [](double r) { return 0.5 + 0.01 * r; };
    for (Index i = 0; i < n; ++i) {
        const double r = a.radius(i);
        a.amplitude(i) = f(r);
        b.amplitude(i) = f(r / phi);
        a.radial_wavenumber(i) = l(r);
        b.radial_wavenumber(i) = -l(r / phi);
    }
    a.valid.assign(std::size_t(n), true);
    b.valid = a.valid;
    a.phase = b.phase = Eigen::ArrayXd::Zero(n);
    const SimilarityResidual s = self_similarity_residual(a, b, phi);
    CHECK(s.amplitude < 1e-3);
    CHECK(s.wavenumber < 1e-3);
    CHECK(s.samples > 50);
}

TEST_CASE("golden constants") {
    CHECK(GoldenConstants::ln_phi == doctest::Approx(std::log(std::numbers::phi)).epsilon(1e-15));
    CHECK(GoldenConstants::golden_angle == doctest::Approx(2.39996322972865332).epsilon(1e-15));
}
