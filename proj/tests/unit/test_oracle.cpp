#include <doctest.h>

#include <cmath>

#include "phyllo/oracle.hpp"

using namespace phyllo;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("second point sits opposite the first") {
    PointConfig start;
    start.points.push_back({0.0, 1.0});
    const PointConfig c = place_points(1, 0.3, 3.0, start);
    REQUIRE(c.points.size() == 2);
    CHECK(std::abs(std::remainder(c.points[1].angle - 1.0, 2.0 * kPi)) == doctest::Approx(kPi).epsilon(1e-8));
    CHECK(c.points[1].axial == doctest::Approx(0.3));
}

TEST_CASE("large rise gives distichous alternation") {
    const PointConfig c = place_points(12, 10.0, 3.0);
    for (double d : divergence_series(c)) CHECK(std::abs(d) == doctest::Approx(kPi).epsilon(1e-8));
}

TEST_CASE("small rise converges to the golden angle") {
    const PointConfig c = place_points(400, 0.02, 3.0);
    const auto d = divergence_series(c);
    for (std::size_t k = d.size() - 20; k < d.size(); ++k)
        CHECK(std::abs(d[k]) == doctest::Approx(2.0 * kPi / (std::numbers::phi * std::numbers::phi)).epsilon(5e-3));
}

TEST_CASE("divergence is wrapped to (−π, π]") {
    PointConfig c;
    c.points = {{0.0, 0.0}, {1.0, 6.0}, {2.0, 1.0}};
    const auto d = divergence_series(c);
    CHECK(d[0] == doctest::Approx(6.0 - 2.0 * kPi));
    CHECK(d[1] == doctest::Approx(-5.0 + 2.0 * kPi));
    CHECK_THROWS_AS(place_points(0, 0.1, 3.0), InvalidArgument);
    CHECK_THROWS_AS(place_points(5, -0.1, 3.0), InvalidArgument);
}

TEST_CASE("cylinder distance wraps the angle") {
    PointConfig c;
    c.circumference = 4.0 * kPi;
    CHECK(c.distance({0.0, 0.1}, {0.0, 2.0 * kPi - 0.1}) == doctest::Approx(0.4));
    CHECK(c.distance({0.0, 0.0}, {3.0, 0.0}) == doctest::Approx(3.0));
}

TEST_CASE("maxima of a localized five-fold pattern") {
    const GridSpec g = make_grid(10.0, 20.0, 101, 200);
    const ScalarField u =
        sample(g, [](double r, double th) { return std::cos(5.0 * th + 0.1) * std::exp(-(r - 15.03) * (r - 15.03)); });
    const PointConfig c = extract_maxima(u);
    REQUIRE(c.points.size() == 5);
    for (const auto& p : c.points) {
        const double k = (p.angle + 0.02) / (2.0 * kPi / 5.0);
        CHECK(std::abs(k - std::round(k)) < 1e-3);
    }
    CHECK(extract_maxima(ScalarField(g)).points.empty());
}

TEST_CASE("comparison of identical and moved point sets") {
    const PointConfig a = place_points(120, 0.1, 3.0);
    Comparison c = compare_maxima(a, a);
    CHECK(c.mean_distance < 1e-12);
    CHECK(c.matched_fraction == 1.0);

    PointConfig b = a;
    for (auto& p : b.points) {
        p.angle = std::fmod(p.angle + 0.7, 2.0 * kPi);
        p.axial += 0.33;
    }
    c = compare_maxima(b, a);
    CHECK(c.mean_distance < 1e-6);
    CHECK(c.matched_fraction == 1.0);

    PointConfig empty;
    CHECK_THROWS(compare_maxima(empty, a));
    PointConfig other = a;
    other.circumference = 3.0;
    CHECK_THROWS(compare_maxima(other, a));
}
