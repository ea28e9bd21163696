#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "airgate/error.hpp"
#include "airgate/gesture.hpp"
#include "airgate/sample_io.hpp"
#include "airgate/synth.hpp"
#include "support.hpp"

using namespace airgate;

namespace {

const std::string kHeader = R"({"format":"airgate-samples","version":1,"units":{"position":"mm","angle":"rad"}})";

// Circumradius from the three side lengths (Heron's formula for the area).
double circumradius(const Vec3& a, const Vec3& b, const Vec3& c) {
    auto dist = [](const Vec3& p, const Vec3& q) { return std::hypot(p[0] - q[0], p[1] - q[1], p[2] - q[2]); };
    const double x = dist(a, b), y = dist(b, c), z = dist(a, c);
    const double s = (x + y + z) / 2;
    const double area = std::sqrt(s * (s - x) * (s - y) * (s - z));
    return x * y * z / (4 * area);
}

std::vector<RawSample> tiny_corpus() {
    return generate_corpus(test::small_config(2, 2, {GestureType::Swipe, GestureType::Abc}), 5);
}

}  // namespace

TEST_CASE("gesture names round trip") {
    for (GestureType g : kAllGestures) CHECK(parse_gesture(to_string(g)) == g);
    CHECK(!parse_gesture("Swipe").has_value());
    CHECK(is_complex(GestureType::Sig));
    CHECK(!is_complex(GestureType::Wave));
}

TEST_CASE("feature layout has 100 distinct named columns") {
    const auto& names = feature_names();
    CHECK(std::set<std::string>(names.begin(), names.end()).size() == kFeatureCount);
    CHECK(names[0] == "grab_strength");
    CHECK(names[kHandFeatures] == "thumb_tip_x");
    CHECK(names[derived_column(kIndexFinger, kCurvature)] == "index_curvature");
}

TEST_CASE("extraction preserves length and yields finite values") {
    for (const RawSample& s : tiny_corpus()) {
        const FeatureSequence f = extract_features(s);
        CHECK(f.rows() == s.frames.size());
        CHECK(f.cols() == kFeatureCount);
        for (double v : f.values()) CHECK(std::isfinite(v));
        CHECK(f == extract_features(s));
    }
}

TEST_CASE("derived columns match geometry") {
    const std::vector<Vec3> path{{0, 0, 0}, {3, 0, 4}, {3, 5, 4}, {3, 5, 4}, {6, 5, 4}};
    const FeatureSequence f = extract_features(test::path_sample(path));
    const auto at = [&](std::size_t t, DerivedFeature d) { return f.at(t, derived_column(kIndexFinger, d)); };
    for (std::size_t d = 0; d < kDerivedPerFinger; ++d) CHECK(f.at(0, derived_column(kIndexFinger, d)) == 0.0);
    CHECK(at(1, kStepDistance) == doctest::Approx(5.0));
    CHECK(at(1, kAngleXY) == doctest::Approx(0.0));
    CHECK(at(1, kAngleXZ) == doctest::Approx(std::atan2(4.0, 3.0)));
    CHECK(at(1, kTurnAngle) == 0.0);
    CHECK(at(2, kTurnAngle) == doctest::Approx(std::numbers::pi / 2));
    CHECK(at(2, kCurvature) == doctest::Approx(1.0 / circumradius(path[0], path[1], path[2])));
    // A repeated frame has no direction and breaks the turn triple.
    CHECK(at(3, kStepDistance) == 0.0);
    CHECK(at(3, kAngleXY) == 0.0);
    CHECK(at(4, kTurnAngle) == 0.0);
    CHECK(at(4, kCurvature) == 0.0);
}

TEST_CASE("curvature of points on a circle is the inverse radius") {
    std::vector<Vec3> path;
    for (int t = 0; t < 40; ++t) path.push_back({25 * std::cos(0.1 * t), 25 * std::sin(0.1 * t), 0});
    const FeatureSequence f = extract_features(test::path_sample(path));
    for (std::size_t t = 2; t < path.size(); ++t) {
        CHECK(f.at(t, derived_column(kIndexFinger, kCurvature)) == doctest::Approx(1.0 / 25.0));
        CHECK(f.at(t, derived_column(kIndexFinger, kTurnAngle)) == doctest::Approx(0.1));
    }
}

TEST_CASE("normalizer gives zero mean and unit spread") {
    std::vector<FeatureSequence> feats;
    for (const RawSample& s : tiny_corpus()) feats.push_back(extract_features(s));
    const NormStats st = fit_normalizer(feats);
    std::vector<double> sum(kFeatureCount, 0.0), sq(kFeatureCount, 0.0);
    std::size_t rows = 0;
    for (const auto& f : feats) {
        const FeatureSequence z = apply_normalizer(f, st);
        for (std::size_t r = 0; r < z.rows(); ++r) {
            for (std::size_t c = 0; c < kFeatureCount; ++c) {
                sum[c] += z.at(r, c);
                sq[c] += z.at(r, c) * z.at(r, c);
            }
        }
        rows += z.rows();
    }
    for (std::size_t c = 0; c < kFeatureCount; ++c) {
        CAPTURE(feature_names()[c]);
        CHECK(std::abs(sum[c] / rows) < 1e-9);
        if (st.is_constant(c)) CHECK(sq[c] == 0.0);
        else CHECK(sq[c] / rows == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(st.is_constant(15));  // hand_type
}

TEST_CASE("invalid samples are rejected") {
    RawSample good = tiny_corpus().front();
    CHECK_NOTHROW(validate(good));
    auto broken = [&](auto edit) {
        RawSample s = good;
        edit(s);
        return s;
    };
    CHECK_THROWS_AS(validate(broken([](RawSample& s) { s.frames.resize(1); })), DataError);
    CHECK_THROWS_AS(validate(broken([](RawSample& s) { s.batch = 0; })), DataError);
    CHECK_THROWS_AS(validate(broken([](RawSample& s) { s.frames[3].timestamp = -1; })), DataError);
    CHECK_THROWS_AS(validate(broken([](RawSample& s) { s.frames[2].pitch = std::nan(""); })), DataError);
    CHECK_THROWS_AS(validate(broken([](RawSample& s) { s.frames[2].grab_strength = 1.5; })), DataError);
    CHECK_THROWS_AS(validate(broken([](RawSample& s) { s.frames[2].fingers[3].tip_direction = {1, 1, 0}; })),
                    DataError);
    CHECK_THROWS_AS(extract_features(broken([](RawSample& s) {
                        s.frames[1].fingers[0].tip_pos[0] = std::numeric_limits<double>::infinity();
                    })),
                    DataError);
}

TEST_CASE("sample files round trip exactly") {
    auto corpus = tiny_corpus();
    corpus[0].frames[1].pitch = 0.1 + 0.2;
    corpus[0].frames[1].yaw = 5e-324;
    corpus[0].frames[1].roll = -0.0;
    corpus[1].batch = 7;
    std::stringstream buf;
    write_samples(buf, corpus, {{"note", "x"}});
    const SampleFile back = read_sample_file(buf);
    CHECK(back.samples == corpus);
    CHECK(back.metadata["note"] == "x");
    CHECK(std::signbit(back.samples[0].frames[1].roll));
    CHECK(content_hash(back.samples) == content_hash(corpus));

    const auto path = std::filesystem::temp_directory_path() / "airgate_io_test.jsonl";
    write_samples(path, corpus);
    CHECK(read_samples(path) == corpus);
    std::filesystem::remove(path);
}

TEST_CASE("content hash tracks content") {
    auto corpus = tiny_corpus();
    const std::string h = content_hash(corpus);
    CHECK(h.size() == 64);
    corpus[0].frames[0].palm_width += 1.0;
    CHECK(content_hash(corpus) != h);
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("malformed sample files report the offending line") {
    std::stringstream ok;
    write_samples(ok, std::vector<RawSample>{tiny_corpus().front()});
    const std::string first = ok.str().substr(ok.str().find('\n') + 1);

    auto error_of = [](const std::string& text) {
        std::stringstream in(text);
        try {
            read_sample_file(in);
        } catch (const DataError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(error_of(kHeader + "\n" + first + "{not json}\n").find("line 3") != std::string::npos);
    std::string renamed = first;
    renamed.replace(renamed.find("\"swipe\""), 7, "\"swoop\"");
    const std::string unknown = error_of(kHeader + "\n" + renamed);
    CHECK(unknown.find("line 2") != std::string::npos);
    CHECK(unknown.find("swoop") != std::string::npos);
    CHECK(error_of(first).find("line 1") != std::string::npos);
    std::stringstream empty("");
    CHECK(read_sample_file(empty).samples.empty());
}
