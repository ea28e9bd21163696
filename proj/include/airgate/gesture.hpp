#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace airgate {

using Vec3 = std::array<double, 3>;

enum class GestureType { Swipe, Wave, Circle, Zoom, Grab, Abc, UserDefined, Sig };

inline constexpr std::array<GestureType, 8> kAllGestures = {
    GestureType::Swipe, GestureType::Wave, GestureType::Circle,      GestureType::Zoom,
    GestureType::Grab,  GestureType::Abc,  GestureType::UserDefined, GestureType::Sig};

/// Lowercase wire name ("swipe", ..., "ud", "sig").
std::string_view to_string(GestureType g);
std::optional<GestureType> parse_gesture(std::string_view name);
/// abc, ud and sig; the rest are the short pre-defined motions.
bool is_complex(GestureType g);

enum class HandType { Left = 0, Right = 1 };

struct FingerState {
    Vec3 tip_pos{};        // mm
    Vec3 tip_velocity{};   // mm/s
    Vec3 tip_direction{};  // unit vector, or zero
    double length = 0.0;   // mm
    double width = 0.0;    // mm

    bool operator==(const FingerState&) const = default;
};

/// One tracker frame. Fingers are ordered thumb, index, middle, ring, pinky.
struct RawFrame {
    double timestamp = 0.0;  // seconds since the start of the sample
    double grab_strength = 0.0;
    double pinch_strength = 0.0;
    double pitch = 0.0;
    double yaw = 0.0;
    double roll = 0.0;
    double palm_width = 0.0;
    Vec3 palm_pos{};
    Vec3 arm_pos{};
    Vec3 wrist_pos{};
    HandType hand_type = HandType::Right;
    // circle, swipe, key-tap, screen-tap
    std::array<bool, 4> gesture_flags{};
    std::array<FingerState, 5> fingers{};

    bool operator==(const RawFrame&) const = default;
};

inline constexpr std::size_t kThumb = 0;
inline constexpr std::size_t kIndexFinger = 1;

struct RawSample {
    std::string sample_id;
    std::string user_id;
    GestureType gesture = GestureType::Swipe;
    int batch = 1;
    std::vector<RawFrame> frames;

    bool operator==(const RawSample&) const = default;
};

/// Throws DataError when the sample breaks a RawSample/RawFrame invariant:
/// fewer than two frames, batch < 1, decreasing timestamps, non-finite values,
/// strengths outside [0,1] or non-unit tip directions.
void validate(const RawSample& sample);

inline constexpr std::size_t kHandFeatures = 20;
inline constexpr std::size_t kFingerFeatures = 11;
inline constexpr std::size_t kRawFeatures = kHandFeatures + 5 * kFingerFeatures;  // 75
inline constexpr std::size_t kDerivedPerFinger = 5;
inline constexpr std::size_t kFeatureCount = kRawFeatures + 5 * kDerivedPerFinger;  // 100

/// Column names in frozen order: 20 hand columns, 5 x 11 finger columns,
/// then 5 derived columns per finger.
const std::array<std::string, kFeatureCount>& feature_names();

/// Column index of the first derived feature of `finger`.
constexpr std::size_t derived_column(std::size_t finger, std::size_t which) {
    return kRawFeatures + finger * kDerivedPerFinger + which;
}
enum DerivedFeature : std::size_t { kStepDistance = 0, kAngleXY, kAngleXZ, kTurnAngle, kCurvature };

/// Row-major N x 100 matrix of frame features.
class FeatureSequence {
public:
    FeatureSequence() = default;
    FeatureSequence(std::string sample_id, std::size_t rows, std::size_t cols = kFeatureCount);
    FeatureSequence(std::string sample_id, std::size_t rows, std::size_t cols, std::vector<double> values);

    const std::string& sample_id() const { return sample_id_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0; }

    double& at(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
    std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }
    std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
    std::span<const double> values() const { return values_; }

    bool operator==(const FeatureSequence&) const = default;

private:
    std::string sample_id_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

/// Builds the N x 100 feature matrix. Derived per-finger columns for frame t:
///   step distance   |p_t - p_{t-1}|
///   x-y angle       atan2(dy, dx) of p_t - p_{t-1}
///   x-z angle       atan2(dz, dx) of p_t - p_{t-1}
///   turn angle      angle between p_{t-1} - p_{t-2} and p_t - p_{t-1}, in [0, pi]
///   curvature       Menger curvature 4*area / (|a||b||c|) of the triangle
///                   (p_{t-2}, p_{t-1}, p_t), i.e. 1 / circumradius
/// Quantities lacking enough predecessors (row 0, and rows 0-1 for the last two)
/// and quantities over zero-length displacements are 0.
FeatureSequence extract_features(const RawSample& sample);

/// Per-column z-score statistics (population standard deviation).
struct NormStats {
    std::vector<double> mean;
    std::vector<double> stddev;

    /// Columns whose spread is below this relative tolerance are treated as constant.
    bool is_constant(std::size_t col) const;
    bool operator==(const NormStats&) const = default;
};

NormStats fit_normalizer(std::span<const FeatureSequence> corpus);
/// Constant columns map to 0.
FeatureSequence apply_normalizer(const FeatureSequence& seq, const NormStats& stats);

}  // namespace airgate
