#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "airgate/dtw.hpp"
#include "airgate/gesture.hpp"
#include "airgate/synth.hpp"

namespace airgate::test {

inline std::vector<double> random_series(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

inline ProjectedSequence random_projected(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    return ProjectedSequence(rows, cols, random_series(rng, rows * cols));
}

/// Small synthetic corpus for fast end-to-end tests.
inline SynthConfig small_config(std::size_t users, std::size_t samples, std::vector<GestureType> gestures) {
    SynthConfig c;
    c.n_users = users;
    c.samples_per_user_per_batch = samples;
    c.gestures = std::move(gestures);
    return c;
}

/// A sample with the given index-finger path; everything else is a plausible constant hand.
inline RawSample path_sample(const std::vector<Vec3>& path, const std::string& id = "s",
                             const std::string& user = "u") {
    RawSample s;
    s.sample_id = id;
    s.user_id = user;
    s.frames.resize(path.size());
    for (std::size_t t = 0; t < path.size(); ++t) {
        RawFrame& f = s.frames[t];
        f.timestamp = 0.01 * static_cast<double>(t);
        f.palm_width = 85.0;
        for (std::size_t k = 0; k < 5; ++k) {
            f.fingers[k].tip_pos = {path[t][0] + 10.0 * k, path[t][1], path[t][2]};
            f.fingers[k].length = 50.0;
            f.fingers[k].width = 15.0;
            f.fingers[k].tip_direction = {0.0, 0.0, -1.0};
        }
    }
    return s;
}

}  // namespace airgate::test
