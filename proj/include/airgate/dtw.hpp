#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "airgate/gesture.hpp"

namespace airgate {

/// Step pattern is fixed to the symmetric set {(1,0), (0,1), (1,1)}.
struct DtwParams {
    /// Divide the accumulated cost by the number of cells on the warping path.
    bool length_normalization = true;
    /// Sakoe-Chiba radius. The effective radius is max(band, |N - M|) so an
    /// end-to-end path always exists. Unset means unlimited.
    std::optional<std::size_t> band;

    bool operator==(const DtwParams&) const = default;
};

struct FeatureSelection {
    std::vector<std::size_t> kept;
    std::vector<double> weights;          // aligned with kept, sum 1
    std::vector<double> per_feature_eer;  // one per column
    NormStats norm_stats;

    nlohmann::ordered_json to_json() const;
    static FeatureSelection from_json(const nlohmann::json& j);
    bool operator==(const FeatureSelection&) const = default;
};

/// sqrt(sum_f w_f (u_f - v_f)^2) over rows already restricted to sel.kept.
double frame_distance(std::span<const double> u, std::span<const double> v, const FeatureSelection& sel);

/// A normalized sequence restricted to the kept columns, each column scaled by
/// sqrt(w_f), so the weighted frame distance becomes a plain Euclidean one.
class ProjectedSequence {
public:
    ProjectedSequence() = default;
    ProjectedSequence(const FeatureSequence& normalized, const FeatureSelection& sel);
    /// Wraps an already projected row-major matrix.
    ProjectedSequence(std::size_t rows, std::size_t cols, std::vector<double> values);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const double* row(std::size_t r) const { return values_.data() + r * cols_; }
    std::span<const double> values() const { return values_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

/// Minimal accumulated frame distance over monotone warping paths. Among
/// equal-cost predecessors the one with the shorter path wins, which makes the
/// result exactly symmetric in its arguments.
double dtw_distance(const ProjectedSequence& a, const ProjectedSequence& b, const DtwParams& params = {});
/// Both sequences must already be normalized with sel.norm_stats.
double dtw_distance(const FeatureSequence& a, const FeatureSequence& b, const FeatureSelection& sel,
                    const DtwParams& params = {});
/// One-dimensional series with |a_i - b_j| as the local cost.
double dtw_distance_1d(std::span<const double> a, std::span<const double> b, const DtwParams& params = {});

/// Templates packed eight to a SIMD group so one probe is aligned against all
/// of them in a single pass. Distances equal dtw_distance bit for bit.
class TemplatePack {
public:
    TemplatePack() = default;
    explicit TemplatePack(std::span<const ProjectedSequence> templates);

    std::size_t size() const { return count_; }
    std::size_t cols() const { return cols_; }
    /// out[j] = dtw_distance(probe, templates[j]). Templates in SIMD groups
    /// lying entirely below index `from` are skipped and their slots left as is.
    void distances(const ProjectedSequence& probe, const DtwParams& params, std::span<double> out,
                   std::size_t from = 0) const;

private:
    struct Group {
        std::size_t max_rows = 0;
        std::vector<std::size_t> lengths;  // one per lane, 0 for empty lanes
        std::vector<double> data;          // [row][col][lane]
    };
    std::size_t count_ = 0;
    std::size_t cols_ = 0;
    std::vector<Group> groups_;
};

/// Single-feature EER of column f: every sample probes every user's templates
/// (leave-one-out for its own user), scored by minus its smallest 1-D DTW
/// distance. `corpus` must be normalized; `users[i]` labels corpus[i].
double single_feature_eer(std::span<const FeatureSequence> corpus, std::span<const std::string> users, std::size_t f,
                          const DtwParams& params = {});
/// single_feature_eer for every column at once.
std::vector<double> all_feature_eers(std::span<const FeatureSequence> corpus, std::span<const std::string> users,
                                     const DtwParams& params = {});

/// Fits z-score statistics on `corpus`, measures every column's EER and keeps
/// those below 0.5 with weights proportional to max(0.5 - EER, 1e-6).
/// Throws DataError listing all EERs if no column qualifies.
FeatureSelection select_features(std::span<const FeatureSequence> corpus, std::span<const std::string> users,
                                 const DtwParams& params = {});

/// Turns normalization and selection into the projected form used by the kernels.
ProjectedSequence project(const FeatureSequence& raw_features, const FeatureSelection& sel);

}  // namespace airgate
