#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "airgate/gesture.hpp"

namespace airgate {

struct CornerParams {
    /// Coarse smoothing scale as a fraction of the trajectory length in samples.
    double sigma_fraction = 0.03;
    /// A curvature peak counts as a corner when the path turns by at least
    /// this angle (radians) between chords reaching 2 sigma either side.
    double min_turn = 0.7853981633974483;  // 45 degrees
    /// Optional extra gate: |kappa| > mean + k * stddev of the smoothed |kappa|.
    std::optional<double> curvature_k;
};

struct CornerResult {
    std::size_t count = 0;
    std::vector<std::size_t> locations;  // frame indices, strictly increasing, interior
    double scale_sigma = 0.0;            // coarse sigma in resampled points
};

using Point2 = std::array<double, 2>;

/// Curvature-scale-space corners of a planar polyline. The path is resampled to
/// the same number of points uniformly by arc length, smoothed with a Gaussian
/// of the coarse scale, and curvature peaks that pass the turn test are
/// localized by tracking them through sigma/2 and sigma/4.
CornerResult detect_corners(std::span<const Point2> path, const CornerParams& params = {});
/// Corners of the index-finger tip trajectory projected onto the x-y plane.
CornerResult detect_corners(const RawSample& sample, const CornerParams& params = {});

std::size_t frame_count(const RawSample& sample);

}  // namespace airgate
