#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "airgate/corners.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace airgate;
using std::numbers::pi;

using oracle::polyline;
using oracle::transform;

TEST_CASE("constructed polylines yield exactly their corner count") {
    std::mt19937_64 rng(31);
    for (std::size_t k = 0; k <= 8; ++k) {
        for (int rep = 0; rep < 10; ++rep) {
            const auto p = polyline(rng, k);
            const CornerResult r = detect_corners(p);
            CAPTURE(k);
            CHECK(r.count == k);
            CHECK(r.locations.size() == r.count);
            for (std::size_t i = 0; i < r.locations.size(); ++i) {
                CHECK(r.locations[i] > 0);
                CHECK(r.locations[i] + 1 < p.size());
                if (i) CHECK(r.locations[i] > r.locations[i - 1]);
            }
            CHECK(r.scale_sigma > 0.0);
        }
    }
}

TEST_CASE("corners land near the true vertices") {
    std::mt19937_64 rng(32);
    const auto p = polyline(rng, 5);
    const CornerResult r = detect_corners(p);
    REQUIRE(r.count == 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(static_cast<double>(r.locations[i]) - 50.0 * (i + 1)) <= 3.0);
}

TEST_CASE("corner count is invariant under rotation, translation and uniform scale") {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> angle(0, 2 * pi), scale(0.05, 20.0), shift(-500, 500);
    for (std::size_t k = 0; k <= 8; ++k) {
        const auto p = polyline(rng, k);
        const std::size_t base = detect_corners(p).count;
        for (int rep = 0; rep < 5; ++rep) {
            CHECK(detect_corners(transform(p, angle(rng), scale(rng), {shift(rng), shift(rng)})).count == base);
        }
    }
}

TEST_CASE("line, circle, square and degenerate paths") {
    std::vector<Point2> line, circle, square, still(30, Point2{4.0, 4.0});
    for (int t = 0; t < 200; ++t) line.push_back({0.5 * t, 0.25 * t});
    for (int t = 0; t <= 200; ++t) circle.push_back({50 * std::cos(2 * pi * t / 200), 50 * std::sin(2 * pi * t / 200)});
    // Start mid-side so all four right angles are interior.
    const Point2 v[] = {{0, -50}, {50, -50}, {50, 50}, {-50, 50}, {-50, -50}, {0, -50}};
    for (int s = 0; s < 5; ++s) {
        const int pts = s == 0 || s == 4 ? 25 : 50;
        for (int t = 0; t < pts; ++t) {
            const double u = static_cast<double>(t) / pts;
            square.push_back({v[s][0] + u * (v[s + 1][0] - v[s][0]), v[s][1] + u * (v[s + 1][1] - v[s][1])});
        }
    }
    CHECK(detect_corners(line).count == 0);
    CHECK(detect_corners(circle).count <= 1);
    CHECK(detect_corners(square).count == 4);
    CHECK(detect_corners(still).count == 0);
}

TEST_CASE("sample corners use the index-finger path") {
    std::vector<Vec3> path;
    for (int t = 0; t < 60; ++t) path.push_back({static_cast<double>(t), 0.0, 3.0 * t});
    for (int t = 1; t < 60; ++t) path.push_back({59.0, static_cast<double>(t), 0.0});
    const RawSample s = test::path_sample(path);
    CHECK(frame_count(s) == path.size());
    CHECK(detect_corners(s).count == 1);
    CHECK(frame_count(test::path_sample({{0, 0, 0}, {1, 0, 0}})) == 2);
}
