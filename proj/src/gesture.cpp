#include "airgate/gesture.hpp"

#include <algorithm>
#include <cmath>

#include "airgate/error.hpp"

namespace airgate {

namespace {

constexpr std::array<std::string_view, 8> kGestureNames = {"swipe", "wave", "circle", "zoom",
                                                           "grab",  "abc",  "ud",     "sig"};

bool finite3(const Vec3& v) {
    return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
}

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

std::array<std::string, kFeatureCount> make_feature_names() {
    std::array<std::string, kFeatureCount> names;
    std::size_t i = 0;
    for (const char* n : {"grab_strength", "pinch_strength", "pitch", "yaw", "roll", "palm_width",
                          "palm_x", "palm_y", "palm_z", "arm_x", "arm_y", "arm_z", "wrist_x",
                          "wrist_y", "wrist_z", "hand_type", "flag_circle", "flag_swipe",
                          "flag_key_tap", "flag_screen_tap"}) {
        names[i++] = n;
    }
    const std::array<std::string, 5> fingers = {"thumb", "index", "middle", "ring", "pinky"};
    for (const auto& f : fingers) {
        for (const char* n : {"tip_x", "tip_y", "tip_z", "vel_x", "vel_y", "vel_z", "dir_x", "dir_y",
                              "dir_z", "length", "width"}) {
            names[i++] = f + "_" + n;
        }
    }
    for (const auto& f : fingers) {
        for (const char* n : {"step", "angle_xy", "angle_xz", "turn", "curvature"}) {
            names[i++] = f + "_" + n;
        }
    }
    return names;
}

}  // namespace

std::string_view to_string(GestureType g) { return kGestureNames[static_cast<std::size_t>(g)]; }

std::optional<GestureType> parse_gesture(std::string_view name) {
    for (std::size_t i = 0; i < kGestureNames.size(); ++i) {
        if (kGestureNames[i] == name) return static_cast<GestureType>(i);
    }
    return std::nullopt;
}

bool is_complex(GestureType g) {
    return g == GestureType::Abc || g == GestureType::UserDefined || g == GestureType::Sig;
}

void validate(const RawSample& sample) {
    const auto fail = [&](const std::string& what) {
        throw DataError("sample '" + sample.sample_id + "': " + what);
    };
    if (sample.frames.size() < 2) fail("needs at least 2 frames");
    if (sample.batch < 1) fail("batch must be >= 1");
    double last_t = -INFINITY;
    for (std::size_t t = 0; t < sample.frames.size(); ++t) {
        const RawFrame& f = sample.frames[t];
        const std::string at = " (frame " + std::to_string(t) + ")";
        if (!std::isfinite(f.timestamp) || f.timestamp < last_t) fail("timestamps must be finite and ordered" + at);
        last_t = f.timestamp;
        for (double v : {f.grab_strength, f.pinch_strength, f.pitch, f.yaw, f.roll, f.palm_width}) {
            if (!std::isfinite(v)) fail("non-finite hand value" + at);
        }
        if (f.grab_strength < 0 || f.grab_strength > 1 || f.pinch_strength < 0 || f.pinch_strength > 1) {
            fail("grab/pinch strength outside [0,1]" + at);
        }
        if (!finite3(f.palm_pos) || !finite3(f.arm_pos) || !finite3(f.wrist_pos)) fail("non-finite hand position" + at);
        for (const FingerState& fs : f.fingers) {
            if (!finite3(fs.tip_pos) || !finite3(fs.tip_velocity) || !finite3(fs.tip_direction) ||
                !std::isfinite(fs.length) || !std::isfinite(fs.width)) {
                fail("non-finite finger value" + at);
            }
            const double n = norm(fs.tip_direction);
            if (n != 0.0 && std::abs(n - 1.0) > 1e-6) fail("tip direction is not a unit vector" + at);
        }
    }
}

const std::array<std::string, kFeatureCount>& feature_names() {
    static const auto names = make_feature_names();
    return names;
}

FeatureSequence::FeatureSequence(std::string sample_id, std::size_t rows, std::size_t cols)
    : sample_id_(std::move(sample_id)), rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

FeatureSequence::FeatureSequence(std::string sample_id, std::size_t rows, std::size_t cols,
                                 std::vector<double> values)
    : sample_id_(std::move(sample_id)), rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows_ * cols_) throw UsageError("FeatureSequence: value count does not match shape");
}

FeatureSequence extract_features(const RawSample& sample) {
    validate(sample);
    const std::size_t n = sample.frames.size();
    FeatureSequence out(sample.sample_id, n, kFeatureCount);

    for (std::size_t t = 0; t < n; ++t) {
        const RawFrame& f = sample.frames[t];
        auto row = out.row(t);
        std::size_t c = 0;
        row[c++] = f.grab_strength;
        row[c++] = f.pinch_strength;
        row[c++] = f.pitch;
        row[c++] = f.yaw;
        row[c++] = f.roll;
        row[c++] = f.palm_width;
        for (const Vec3* v : {&f.palm_pos, &f.arm_pos, &f.wrist_pos}) {
            for (double x : *v) row[c++] = x;
        }
        row[c++] = f.hand_type == HandType::Right ? 1.0 : 0.0;
        for (bool flag : f.gesture_flags) row[c++] = flag ? 1.0 : 0.0;
        for (const FingerState& fs : f.fingers) {
            for (const Vec3* v : {&fs.tip_pos, &fs.tip_velocity, &fs.tip_direction}) {
                for (double x : *v) row[c++] = x;
            }
            row[c++] = fs.length;
            row[c++] = fs.width;
        }

        if (t == 0) continue;
        for (std::size_t finger = 0; finger < 5; ++finger) {
            const Vec3& p2 = f.fingers[finger].tip_pos;
            const Vec3& p1 = sample.frames[t - 1].fingers[finger].tip_pos;
            const Vec3 d1 = sub(p2, p1);
            const double step = norm(d1);
            row[derived_column(finger, kStepDistance)] = step;
            if (step > 0.0) {
                row[derived_column(finger, kAngleXY)] = std::atan2(d1[1], d1[0]);
                row[derived_column(finger, kAngleXZ)] = std::atan2(d1[2], d1[0]);
            }
            if (t < 2) continue;
            const Vec3& p0 = sample.frames[t - 2].fingers[finger].tip_pos;
            const Vec3 d0 = sub(p1, p0);
            const double prev_step = norm(d0);
            if (step > 0.0 && prev_step > 0.0) {
                row[derived_column(finger, kTurnAngle)] = std::atan2(norm(cross(d0, d1)), dot(d0, d1));
                const double chord = norm(sub(p2, p0));
                if (chord > 0.0) {
                    // |d0 x d1| is twice the triangle area.
                    row[derived_column(finger, kCurvature)] = 2.0 * norm(cross(d0, d1)) / (step * prev_step * chord);
                }
            }
        }
    }
    return out;
}

bool NormStats::is_constant(std::size_t col) const {
    return !(stddev[col] > 1e-12 * std::max(1.0, std::abs(mean[col])));
}

NormStats fit_normalizer(std::span<const FeatureSequence> corpus) {
    if (corpus.empty()) throw DataError("fit_normalizer: empty corpus");
    const std::size_t cols = corpus.front().cols();
    std::size_t rows = 0;
    std::vector<double> sum(cols, 0.0);
    for (const auto& seq : corpus) {
        if (seq.cols() != cols) throw DataError("fit_normalizer: column count mismatch");
        for (std::size_t r = 0; r < seq.rows(); ++r) {
            for (std::size_t c = 0; c < cols; ++c) sum[c] += seq.at(r, c);
        }
        rows += seq.rows();
    }
    if (rows == 0) throw DataError("fit_normalizer: corpus has no frames");
    NormStats stats{std::vector<double>(cols), std::vector<double>(cols, 0.0)};
    for (std::size_t c = 0; c < cols; ++c) stats.mean[c] = sum[c] / static_cast<double>(rows);
    for (const auto& seq : corpus) {
        for (std::size_t r = 0; r < seq.rows(); ++r) {
            for (std::size_t c = 0; c < cols; ++c) {
                const double d = seq.at(r, c) - stats.mean[c];
                stats.stddev[c] += d * d;
            }
        }
    }
    for (double& s : stats.stddev) s = std::sqrt(s / static_cast<double>(rows));
    return stats;
}

FeatureSequence apply_normalizer(const FeatureSequence& seq, const NormStats& stats) {
    if (seq.cols() != stats.mean.size()) throw DataError("apply_normalizer: column count mismatch");
    FeatureSequence out(seq.sample_id(), seq.rows(), seq.cols());
    for (std::size_t c = 0; c < seq.cols(); ++c) {
        if (stats.is_constant(c)) continue;
        const double inv = 1.0 / stats.stddev[c];
        for (std::size_t r = 0; r < seq.rows(); ++r) out.at(r, c) = (seq.at(r, c) - stats.mean[c]) * inv;
    }
    return out;
}

}  // namespace airgate
