#include "airgate/corners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "airgate/error.hpp"

namespace airgate {

namespace {

struct Resampled {
    std::vector<Point2> pts;
    std::vector<std::size_t> frame;  // nearest source index for each point
};

Resampled resample(std::span<const Point2> path, double total, const std::vector<double>& cum) {
    const std::size_t n = path.size();
    Resampled r;
    r.pts.resize(n);
    r.frame.resize(n);
    std::size_t seg = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double s = total * static_cast<double>(k) / static_cast<double>(n - 1);
        while (seg + 2 < n && cum[seg + 1] < s) ++seg;
        const double len = cum[seg + 1] - cum[seg];
        const double t = len > 0 ? std::clamp((s - cum[seg]) / len, 0.0, 1.0) : 0.0;
        r.pts[k] = {path[seg][0] + t * (path[seg + 1][0] - path[seg][0]),
                    path[seg][1] + t * (path[seg + 1][1] - path[seg][1])};
        r.frame[k] = t < 0.5 ? seg : seg + 1;
    }
    return r;
}

// Gaussian smoothing with odd reflection at the ends, which keeps straight
// end segments straight.
std::vector<Point2> smooth(const std::vector<Point2>& p, double sigma) {
    const auto n = static_cast<std::ptrdiff_t>(p.size());
    const auto radius = static_cast<std::ptrdiff_t>(std::ceil(4.0 * sigma));
    std::vector<double> w(2 * radius + 1);
    for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
        w[k + radius] = std::exp(-0.5 * static_cast<double>(k * k) / (sigma * sigma));
    }
    const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
    auto at = [&](std::ptrdiff_t i, int d) {
        if (i < 0) return 2.0 * p[0][d] - p[std::min(-i, n - 1)][d];
        if (i >= n) return 2.0 * p[n - 1][d] - p[std::max(2 * (n - 1) - i, std::ptrdiff_t{0})][d];
        return p[i][d];
    };
    std::vector<Point2> out(p.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double sx = 0, sy = 0;
        for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
            sx += w[k + radius] * at(i + k, 0);
            sy += w[k + radius] * at(i + k, 1);
        }
        out[i] = {sx / wsum, sy / wsum};
    }
    return out;
}

std::vector<double> abs_curvature(const std::vector<Point2>& p) {
    std::vector<double> k(p.size(), 0.0);
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        const double dx = 0.5 * (p[i + 1][0] - p[i - 1][0]);
        const double dy = 0.5 * (p[i + 1][1] - p[i - 1][1]);
        const double ddx = p[i + 1][0] - 2.0 * p[i][0] + p[i - 1][0];
        const double ddy = p[i + 1][1] - 2.0 * p[i][1] + p[i - 1][1];
        const double speed2 = dx * dx + dy * dy;
        if (speed2 > 0) k[i] = std::abs(dx * ddy - dy * ddx) / std::pow(speed2, 1.5);
    }
    return k;
}

double turn_angle(const std::vector<Point2>& p, std::size_t i, std::size_t w) {
    const std::size_t a = i > w ? i - w : 0;
    const std::size_t b = std::min(p.size() - 1, i + w);
    const double ux = p[i][0] - p[a][0], uy = p[i][1] - p[a][1];
    const double vx = p[b][0] - p[i][0], vy = p[b][1] - p[i][1];
    if ((ux == 0 && uy == 0) || (vx == 0 && vy == 0)) return 0.0;
    return std::atan2(std::abs(ux * vy - uy * vx), ux * vx + uy * vy);
}

std::size_t track(const std::vector<double>& kappa, std::size_t from, std::size_t radius) {
    const std::size_t lo = from > radius ? from - radius : 1;
    const std::size_t hi = std::min(kappa.size() - 2, from + radius);
    std::size_t best = from;
    for (std::size_t i = lo; i <= hi; ++i) {
        if (kappa[i] > kappa[best]) best = i;
    }
    return best;
}

}  // namespace

CornerResult detect_corners(std::span<const Point2> path, const CornerParams& params) {
    const std::size_t n = path.size();
    if (n < 5) throw DataError("corner detection needs at least 5 points");
    if (!(params.sigma_fraction > 0)) throw UsageError("sigma_fraction must be positive");

    CornerResult result;
    result.scale_sigma = std::max(params.sigma_fraction * static_cast<double>(n), 1.0);

    std::vector<double> cum(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        cum[i] = cum[i - 1] + std::hypot(path[i][0] - path[i - 1][0], path[i][1] - path[i - 1][1]);
    }
    const double total = cum.back();
    if (!(total > 0)) return result;

    const Resampled rs = resample(path, total, cum);
    const double sigma = result.scale_sigma;
    const auto coarse = abs_curvature(smooth(rs.pts, sigma));
    const auto w = static_cast<std::size_t>(std::lround(2.0 * sigma));

    double gate = 0.0;
    if (params.curvature_k) {
        double mu = 0, var = 0;
        for (double k : coarse) mu += k;
        mu /= static_cast<double>(n);
        for (double k : coarse) var += (k - mu) * (k - mu);
        gate = mu + *params.curvature_k * std::sqrt(var / static_cast<double>(n));
    }

    std::vector<std::size_t> cand;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(coarse[i] > coarse[i - 1] && coarse[i] >= coarse[i + 1])) continue;
        if (params.curvature_k && !(coarse[i] > gate)) continue;
        if (turn_angle(rs.pts, i, w) < params.min_turn) continue;
        cand.push_back(i);
    }
    // Keep the strongest peak within each 2-sigma neighbourhood.
    std::sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) {
        return coarse[a] != coarse[b] ? coarse[a] > coarse[b] : a < b;
    });
    std::vector<std::size_t> kept;
    for (std::size_t c : cand) {
        const bool near = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) { return (c > k ? c - k : k - c) <= w; });
        if (!near) kept.push_back(c);
    }

    const auto mid = abs_curvature(smooth(rs.pts, sigma / 2));
    const auto fine = abs_curvature(smooth(rs.pts, sigma / 4));
    for (std::size_t c : kept) {
        std::size_t loc = track(mid, c, static_cast<std::size_t>(std::ceil(sigma / 2)));
        loc = track(fine, loc, static_cast<std::size_t>(std::ceil(sigma / 4)));
        const std::size_t frame = rs.frame[loc];
        if (frame > 0 && frame + 1 < n) result.locations.push_back(frame);
    }
    std::sort(result.locations.begin(), result.locations.end());
    result.locations.erase(std::unique(result.locations.begin(), result.locations.end()), result.locations.end());
    result.count = result.locations.size();
    return result;
}

CornerResult detect_corners(const RawSample& sample, const CornerParams& params) {
    std::vector<Point2> path;
    path.reserve(sample.frames.size());
    for (const RawFrame& f : sample.frames) {
        const Vec3& p = f.fingers[kIndexFinger].tip_pos;
        path.push_back({p[0], p[1]});
    }
    return detect_corners(path, params);
}

std::size_t frame_count(const RawSample& sample) { return sample.frames.size(); }

}  // namespace airgate
