#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "airgate/dtw.hpp"
#include "airgate/error.hpp"
#include "dtw_kernels.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace airgate;
using airgate::test::random_projected;
using airgate::test::random_series;
using oracle::close;
using oracle::dtw_enumerate;

namespace {

double euclid(const ProjectedSequence& a, std::size_t i, const ProjectedSequence& b, std::size_t j) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.cols(); ++k) s += (a.row(i)[k] - b.row(j)[k]) * (a.row(i)[k] - b.row(j)[k]);
    return std::sqrt(s);
}

ProjectedSequence repeat_rows(const ProjectedSequence& s, std::size_t times) {
    std::vector<double> v;
    for (std::size_t r = 0; r < s.rows(); ++r) {
        for (std::size_t t = 0; t < times; ++t) v.insert(v.end(), s.row(r), s.row(r) + s.cols());
    }
    return ProjectedSequence(s.rows() * times, s.cols(), v);
}

}  // namespace

TEST_CASE("1-D DTW equals exhaustive path search on random short pairs") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> len(1, 4);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = random_series(rng, len(rng));
        const auto b = random_series(rng, len(rng));
        auto cost = [&](std::size_t i, std::size_t j) { return std::abs(a[i] - b[j]); };
        for (bool norm : {true, false}) {
            DtwParams p;
            p.length_normalization = norm;
            CHECK(close(dtw_distance_1d(a, b, p), dtw_enumerate(a.size(), b.size(), cost, norm), 1e-12));
        }
    }
}

TEST_CASE("tied path costs resolve to the shortest path") {
    // Integer values make ties exact, so the shortest-path rule decides the normalized result.
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> val(0, 2);
    std::uniform_int_distribution<std::size_t> len(1, 6);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> a(len(rng)), b(len(rng));
        for (double& x : a) x = val(rng);
        for (double& x : b) x = val(rng);
        auto cost = [&](std::size_t i, std::size_t j) { return std::abs(a[i] - b[j]); };
        CHECK(dtw_distance_1d(a, b) == dtw_enumerate(a.size(), b.size(), cost, true));
    }
}

TEST_CASE("multi-column DTW equals exhaustive path search") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> len(1, 6);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = random_projected(rng, len(rng), 3);
        const auto b = random_projected(rng, len(rng), 3);
        auto cost = [&](std::size_t i, std::size_t j) { return euclid(a, i, b, j); };
        CHECK(close(dtw_distance(a, b), dtw_enumerate(a.rows(), b.rows(), cost, true), 1e-12));
    }
}

TEST_CASE("banded DTW equals path search inside the widened band") {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<std::size_t> len(1, 7);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = random_series(rng, len(rng));
        const auto b = random_series(rng, len(rng));
        const std::size_t band = trial % 3;
        const std::size_t gap = a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
        auto cost = [&](std::size_t i, std::size_t j) { return std::abs(a[i] - b[j]); };
        DtwParams p;
        p.band = band;
        CHECK(close(dtw_distance_1d(a, b, p), dtw_enumerate(a.size(), b.size(), cost, true, std::max(band, gap)), 1e-12));
        CHECK(dtw_distance_1d(a, b, p) >= dtw_distance_1d(a, b));
    }
}

TEST_CASE("DTW properties") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::size_t> len(1, 30);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = random_projected(rng, len(rng), 4);
        const auto b = random_projected(rng, len(rng), 4);
        const double ab = dtw_distance(a, b);
        CHECK(ab >= 0.0);
        CHECK(ab == dtw_distance(b, a));
        CHECK(dtw_distance(a, a) == 0.0);
        CHECK(dtw_distance(a, repeat_rows(a, 2)) == 0.0);
        DtwParams wide;
        wide.band = std::max(a.rows(), b.rows());
        CHECK(dtw_distance(a, b, wide) == ab);
    }
}

TEST_CASE("DTW worked examples") {
    const std::vector<double> a{0, 1, 2}, b{0, 1, 1, 2};
    CHECK(dtw_distance_1d(a, b) == 0.0);
    const std::vector<double> c{0, 0}, d{1, 1, 1};
    DtwParams raw;
    raw.length_normalization = false;
    CHECK(dtw_distance_1d(c, d, raw) == 3.0);
    CHECK(dtw_distance_1d(c, d) == 1.0);
    CHECK_THROWS_AS(dtw_distance_1d(std::vector<double>{}, d), DataError);
}

TEST_CASE("weighted frame distance matches the projected form") {
    std::mt19937_64 rng(6);
    FeatureSelection sel;
    sel.kept = {1, 4, 7};
    sel.weights = {0.2, 0.5, 0.3};
    sel.norm_stats.mean.assign(10, 0.0);
    sel.norm_stats.stddev.assign(10, 1.0);
    FeatureSequence x("x", 1, 10, random_series(rng, 10)), y("y", 1, 10, random_series(rng, 10));
    const std::vector<double> u{x.at(0, 1), x.at(0, 4), x.at(0, 7)}, v{y.at(0, 1), y.at(0, 4), y.at(0, 7)};
    CHECK(close(frame_distance(u, v, sel), dtw_distance(x, y, sel), 1e-14));
}

TEST_CASE("TemplatePack distances are bit-identical to dtw_distance") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> len(1, 60);
    for (std::size_t cols : {1u, 3u, 8u, 17u, 95u}) {
        std::vector<ProjectedSequence> templates;
        for (int t = 0; t < 21; ++t) templates.push_back(random_projected(rng, len(rng), cols));
        const TemplatePack pack(templates);
        for (int probe_no = 0; probe_no < 3; ++probe_no) {
            const auto probe = random_projected(rng, len(rng), cols);
            for (std::optional<std::size_t> band : {std::optional<std::size_t>{}, std::optional<std::size_t>{3}}) {
                for (bool norm : {true, false}) {
                    DtwParams p;
                    p.band = band;
                    p.length_normalization = norm;
                    std::vector<double> out(templates.size());
                    pack.distances(probe, p, out);
                    for (std::size_t j = 0; j < templates.size(); ++j) {
                        CHECK(out[j] == dtw_distance(probe, templates[j], p));
                    }
                }
            }
        }
    }
}

TEST_CASE("TemplatePack skips groups below the start index") {
    std::mt19937_64 rng(8);
    std::vector<ProjectedSequence> templates;
    for (int t = 0; t < 20; ++t) templates.push_back(random_projected(rng, 10, 2));
    const TemplatePack pack(templates);
    const auto probe = random_projected(rng, 12, 2);
    std::vector<double> out(templates.size(), -1.0);
    pack.distances(probe, {}, out, 17);
    const std::size_t first = 17 / detail::kLanes * detail::kLanes;
    for (std::size_t j = 0; j < templates.size(); ++j) {
        if (j < first) CHECK(out[j] == -1.0);
        else CHECK(out[j] == dtw_distance(probe, templates[j]));
    }
}

namespace {

struct Variant {
    const char* name;
    bool available;
    detail::PackKernel pack;
    detail::LanesKernel lanes;
};

std::vector<Variant> variants() {
    __builtin_cpu_init();
    const bool fma = __builtin_cpu_supports("fma");
    return {{"generic", true, detail::generic::pack_kernel, detail::generic::lanes_1d_kernel},
            {"avx2", __builtin_cpu_supports("avx2") && fma, detail::avx2::pack_kernel, detail::avx2::lanes_1d_kernel},
            {"avx512", __builtin_cpu_supports("avx512f") && fma, detail::avx512::pack_kernel,
             detail::avx512::lanes_1d_kernel}};
}

}  // namespace

TEST_CASE("every instruction-set kernel matches the scalar DP exactly") {
    using detail::kLanes;
    using detail::kWide;
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<std::size_t> len(1, 45);
    for (const Variant& v : variants()) {
        if (!v.available) continue;
        CAPTURE(v.name);
        for (int trial = 0; trial < 12; ++trial) {
            const std::size_t cols = 1 + trial * 7 % 40;
            DtwParams p;
            if (trial % 3 == 1) p.band = trial % 5;
            p.length_normalization = trial % 4 != 3;

            std::vector<ProjectedSequence> lane_templates;
            std::vector<std::size_t> lengths(kLanes, 0);
            std::size_t max_rows = 0;
            const std::size_t used = 1 + trial % kLanes;
            for (std::size_t l = 0; l < used; ++l) {
                lane_templates.push_back(random_projected(rng, len(rng), cols));
                lengths[l] = lane_templates.back().rows();
                max_rows = std::max(max_rows, lengths[l]);
            }
            std::vector<double> data(max_rows * cols * kLanes, 0.0);
            for (std::size_t l = 0; l < used; ++l) {
                for (std::size_t r = 0; r < lengths[l]; ++r) {
                    for (std::size_t k = 0; k < cols; ++k) data[(r * cols + k) * kLanes + l] = lane_templates[l].row(r)[k];
                }
            }
            const auto probe = random_projected(rng, len(rng), cols);
            std::vector<double> out(kLanes, 0.0);
            v.pack(probe.row(0), probe.rows(), cols, data.data(), max_rows, lengths.data(), p, out.data());
            for (std::size_t l = 0; l < used; ++l) CHECK(out[l] == dtw_distance(probe, lane_templates[l], p));

            const std::size_t n = len(rng), m = len(rng);
            std::vector<double> a(n * kWide), b(m * kWide);
            for (double& x : a) x = std::uniform_real_distribution<double>(-2, 2)(rng);
            for (double& x : b) x = std::uniform_real_distribution<double>(-2, 2)(rng);
            std::vector<double> lanes_out(kWide);
            v.lanes(a.data(), n, b.data(), m, p, lanes_out.data());
            for (std::size_t l = 0; l < kWide; ++l) {
                std::vector<double> x(n), y(m);
                for (std::size_t i = 0; i < n; ++i) x[i] = a[i * kWide + l];
                for (std::size_t j = 0; j < m; ++j) y[j] = b[j * kWide + l];
                CHECK(lanes_out[l] == dtw_distance_1d(x, y, p));
            }
        }
    }
}

TEST_CASE("batched feature EERs equal the one-column computation") {
    std::mt19937_64 rng(10);
    std::vector<FeatureSequence> corpus;
    std::vector<std::string> users;
    for (int u = 0; u < 3; ++u) {
        for (int s = 0; s < 4; ++s) {
            const std::size_t rows = 8 + s;
            FeatureSequence f("s", rows, 11, random_series(rng, rows * 11));
            for (std::size_t r = 0; r < rows; ++r) f.at(r, 2) += 3.0 * u;
            for (std::size_t r = 0; r < rows; ++r) f.at(r, 5) = 0.0;
            corpus.push_back(f);
            users.push_back("u" + std::to_string(u));
        }
    }
    const auto all = all_feature_eers(corpus, users);
    for (std::size_t f = 0; f < 11; ++f) CHECK(all[f] == single_feature_eer(corpus, users, f));
    CHECK(all[2] == 0.0);
    CHECK(all[5] == 0.5);
}

TEST_CASE("FeatureSelection JSON round trip") {
    FeatureSelection s;
    s.kept = {0, 2};
    s.weights = {0.25, 0.75};
    s.per_feature_eer = {0.1, 0.5, 0.3};
    s.norm_stats.mean = {1.0 / 3.0, 2.0, -1e-300};
    s.norm_stats.stddev = {1.0, 0.0, 5e10};
    CHECK(FeatureSelection::from_json(nlohmann::json::parse(s.to_json().dump())) == s);
    auto bad = s.to_json();
    bad["kept"] = {7};
    bad["weights"] = {1.0};
    CHECK_THROWS_AS(FeatureSelection::from_json(bad), DataError);
}

TEST_CASE("AIRGATE_DTW_ISA picks the kernel") {
    const char* want = std::getenv("AIRGATE_DTW_ISA");
    if (want == nullptr || *want == '\0') return;
    CHECK(std::string(detail::kernels().isa) == want);
}
