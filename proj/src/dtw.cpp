#include "airgate/dtw.hpp"

#include <algorithm>
#include <cstdlib>
#include <string_view>
#include <cmath>
#include <limits>
#include <new>
#include <sstream>

#include "airgate/error.hpp"
#include "airgate/metrics.hpp"
#include "airgate/parallel.hpp"
#include "dtw_kernels.hpp"

namespace airgate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using detail::kLanes;
using detail::kWide;
using detail::band_radius;

// Row-by-row DP over an n x m grid. cost(i, j) is the local cost of frames
// i and j (0-based). Cells outside the band are never written and read as
// infinite.
template <class Cost>
double dtw_scalar(std::size_t n, std::size_t m, const DtwParams& params, Cost cost) {
    if (n == 0 || m == 0) throw DataError("dtw: empty sequence");
    const std::size_t w = band_radius(params, n, m);
    std::vector<double> pc(m + 1, kInf), pl(m + 1, 0.0), cc(m + 1, kInf), cl(m + 1, 0.0);
    pc[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t lo = i > w ? i - w : 1;
        const std::size_t hi = std::min(m, i + w);
        cc[lo - 1] = kInf;
        for (std::size_t j = lo; j <= hi; ++j) {
            double bc = pc[j - 1], bl = pl[j - 1];
            if (pc[j] < bc || (pc[j] == bc && pl[j] < bl)) {
                bc = pc[j];
                bl = pl[j];
            }
            if (cc[j - 1] < bc || (cc[j - 1] == bc && cl[j - 1] < bl)) {
                bc = cc[j - 1];
                bl = cl[j - 1];
            }
            cc[j] = cost(i - 1, j - 1) + bc;
            cl[j] = bl + 1.0;
        }
        if (hi < m) cc[hi + 1] = kInf;
        std::swap(pc, cc);
        std::swap(pl, cl);
    }
    return params.length_normalization ? pc[m] / pl[m] : pc[m];
}


void check_labels(std::span<const FeatureSequence> corpus, std::span<const std::string> users) {
    if (corpus.size() != users.size()) throw UsageError("feature EER: one user label per sequence required");
    std::vector<std::string> sorted(users.begin(), users.end());
    std::sort(sorted.begin(), sorted.end());
    std::size_t distinct = 0;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        if (j - i < 2) throw DataError("feature EER: user '" + sorted[i] + "' has fewer than 2 samples");
        ++distinct;
        i = j;
    }
    if (distinct < 2) throw DataError("feature EER: need at least 2 users");
    for (const auto& s : corpus) {
        if (s.empty()) throw DataError("feature EER: empty sequence");
        if (s.cols() != corpus.front().cols()) throw DataError("feature EER: column count mismatch");
    }
}

// Leave-one-out nearest-template scores from a symmetric distance lookup.
template <class Dist>
ScoreSet loo_scores(std::span<const std::string> users, Dist dist) {
    std::vector<std::string> ids(users.begin(), users.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::vector<std::size_t> label(users.size());
    for (std::size_t i = 0; i < users.size(); ++i) {
        label[i] = static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), users[i]) - ids.begin());
    }
    ScoreSet scores;
    std::vector<double> best(ids.size());
    for (std::size_t p = 0; p < users.size(); ++p) {
        std::fill(best.begin(), best.end(), kInf);
        for (std::size_t q = 0; q < users.size(); ++q) {
            if (q == p) continue;
            best[label[q]] = std::min(best[label[q]], dist(p, q));
        }
        for (std::size_t u = 0; u < ids.size(); ++u) {
            (u == label[p] ? scores.genuine : scores.impostor).push_back(-best[u]);
        }
    }
    return scores;
}

}  // namespace

nlohmann::ordered_json FeatureSelection::to_json() const {
    return {{"kept", kept},
            {"weights", weights},
            {"per_feature_eer", per_feature_eer},
            {"norm_stats", {{"mean", norm_stats.mean}, {"stddev", norm_stats.stddev}}}};
}

FeatureSelection FeatureSelection::from_json(const nlohmann::json& j) {
    FeatureSelection s;
    s.kept = j.at("kept").get<std::vector<std::size_t>>();
    s.weights = j.at("weights").get<std::vector<double>>();
    s.per_feature_eer = j.at("per_feature_eer").get<std::vector<double>>();
    s.norm_stats.mean = j.at("norm_stats").at("mean").get<std::vector<double>>();
    s.norm_stats.stddev = j.at("norm_stats").at("stddev").get<std::vector<double>>();
    const std::size_t cols = s.norm_stats.mean.size();
    if (s.kept.empty() || s.kept.size() != s.weights.size() || s.norm_stats.stddev.size() != cols ||
        s.per_feature_eer.size() != cols) {
        throw DataError("feature selection: inconsistent sizes");
    }
    for (std::size_t k = 0; k < s.kept.size(); ++k) {
        if (s.kept[k] >= cols || !(s.weights[k] > 0.0)) throw DataError("feature selection: bad kept column or weight");
    }
    return s;
}

double frame_distance(std::span<const double> u, std::span<const double> v, const FeatureSelection& sel) {
    if (u.size() != sel.kept.size() || v.size() != sel.kept.size()) {
        throw UsageError("frame_distance: rows must have one value per kept feature");
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double d = u[k] - v[k];
        acc += sel.weights[k] * d * d;
    }
    return std::sqrt(acc);
}

ProjectedSequence::ProjectedSequence(const FeatureSequence& normalized, const FeatureSelection& sel)
    : rows_(normalized.rows()), cols_(sel.kept.size()), values_(rows_ * cols_) {
    for (std::size_t k = 0; k < cols_; ++k) {
        if (sel.kept[k] >= normalized.cols()) throw DataError("projection: kept column out of range");
    }
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t k = 0; k < cols_; ++k) {
            values_[r * cols_ + k] = normalized.at(r, sel.kept[k]) * std::sqrt(sel.weights[k]);
        }
    }
}

ProjectedSequence::ProjectedSequence(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows_ * cols_) throw UsageError("ProjectedSequence: value count does not match shape");
}

ProjectedSequence project(const FeatureSequence& raw_features, const FeatureSelection& sel) {
    return ProjectedSequence(apply_normalizer(raw_features, sel.norm_stats), sel);
}

double dtw_distance(const ProjectedSequence& a, const ProjectedSequence& b, const DtwParams& params) {
    if (a.cols() != b.cols()) throw UsageError("dtw: column count mismatch");
    const std::size_t K = a.cols();
    return dtw_scalar(a.rows(), b.rows(), params, [&](std::size_t i, std::size_t j) {
        const double* x = a.row(i);
        const double* y = b.row(j);
        double acc = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            const double d = x[k] - y[k];
            acc = std::fma(d, d, acc);
        }
        return std::sqrt(acc);
    });
}

double dtw_distance(const FeatureSequence& a, const FeatureSequence& b, const FeatureSelection& sel,
                    const DtwParams& params) {
    if (a.empty() || b.empty()) throw DataError("dtw: empty sequence");
    return dtw_distance(ProjectedSequence(a, sel), ProjectedSequence(b, sel), params);
}

double dtw_distance_1d(std::span<const double> a, std::span<const double> b, const DtwParams& params) {
    return dtw_scalar(a.size(), b.size(), params, [&](std::size_t i, std::size_t j) {
        return std::abs(a[i] - b[j]);
    });
}

TemplatePack::TemplatePack(std::span<const ProjectedSequence> templates) : count_(templates.size()) {
    if (templates.empty()) return;
    cols_ = templates.front().cols();
    for (std::size_t g0 = 0; g0 < templates.size(); g0 += kLanes) {
        Group g;
        g.lengths.assign(kLanes, 0);
        for (std::size_t l = 0; l < kLanes && g0 + l < templates.size(); ++l) {
            const auto& t = templates[g0 + l];
            if (t.cols() != cols_) throw UsageError("TemplatePack: column count mismatch");
            if (t.rows() == 0) throw DataError("TemplatePack: empty template");
            g.lengths[l] = t.rows();
            g.max_rows = std::max(g.max_rows, t.rows());
        }
        g.data.assign(g.max_rows * cols_ * kLanes, 0.0);
        for (std::size_t l = 0; l < kLanes && g0 + l < templates.size(); ++l) {
            const auto& t = templates[g0 + l];
            for (std::size_t r = 0; r < t.rows(); ++r) {
                for (std::size_t k = 0; k < cols_; ++k) g.data[(r * cols_ + k) * kLanes + l] = t.row(r)[k];
            }
        }
        groups_.push_back(std::move(g));
    }
}

void TemplatePack::distances(const ProjectedSequence& probe, const DtwParams& params, std::span<double> out,
                             std::size_t from) const {
    if (out.size() != count_) throw UsageError("TemplatePack: output size mismatch");
    if (probe.rows() == 0) throw DataError("dtw: empty sequence");
    if (count_ > 0 && probe.cols() != cols_) throw UsageError("dtw: column count mismatch");
    double lane_out[kLanes];
    for (std::size_t g = from / kLanes; g < groups_.size(); ++g) {
        const Group& grp = groups_[g];
        detail::kernels().pack(probe.row(0), probe.rows(), cols_, grp.data.data(), grp.max_rows, grp.lengths.data(), params,
                    lane_out);
        for (std::size_t l = 0; l < kLanes && g * kLanes + l < count_; ++l) out[g * kLanes + l] = lane_out[l];
    }
}

double single_feature_eer(std::span<const FeatureSequence> corpus, std::span<const std::string> users, std::size_t f,
                          const DtwParams& params) {
    check_labels(corpus, users);
    if (f >= corpus.front().cols()) throw UsageError("single_feature_eer: column out of range");
    std::vector<std::vector<double>> cols(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        for (std::size_t r = 0; r < corpus[i].rows(); ++r) cols[i].push_back(corpus[i].at(r, f));
    }
    const std::size_t n = corpus.size();
    std::vector<double> dist(n * n, 0.0);
    parallel_for(n, [&](std::size_t p) {
        for (std::size_t q = p + 1; q < n; ++q) dist[p * n + q] = dtw_distance_1d(cols[p], cols[q], params);
    });
    return compute_eer(loo_scores(users, [&](std::size_t p, std::size_t q) {
               return p < q ? dist[p * n + q] : dist[q * n + p];
           })).eer;
}

std::vector<double> all_feature_eers(std::span<const FeatureSequence> corpus, std::span<const std::string> users,
                                     const DtwParams& params) {
    check_labels(corpus, users);
    const std::size_t n = corpus.size();
    const std::size_t F = corpus.front().cols();
    std::vector<double> eers(F, 0.5);

    // Columns that are identically zero give all-zero distances, whose scores
    // are one big tie and evaluate to exactly 0.5.
    std::vector<std::size_t> active;
    for (std::size_t f = 0; f < F; ++f) {
        bool nonzero = false;
        for (const auto& s : corpus) {
            for (std::size_t r = 0; r < s.rows() && !nonzero; ++r) nonzero = s.at(r, f) != 0.0;
            if (nonzero) break;
        }
        if (nonzero) active.push_back(f);
    }

    for (std::size_t g0 = 0; g0 < active.size(); g0 += kWide) {
        const std::size_t lanes = std::min(kWide, active.size() - g0);
        std::vector<std::vector<double>> packed(n);
        for (std::size_t i = 0; i < n; ++i) {
            packed[i].assign(corpus[i].rows() * kWide, 0.0);
            for (std::size_t r = 0; r < corpus[i].rows(); ++r) {
                for (std::size_t l = 0; l < lanes; ++l) packed[i][r * kWide + l] = corpus[i].at(r, active[g0 + l]);
            }
        }
        std::vector<double> dist(n * n * kWide, 0.0);
        parallel_for(n, [&](std::size_t p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                detail::kernels().lanes(packed[p].data(), corpus[p].rows(), packed[q].data(), corpus[q].rows(),
                                        params, &dist[(p * n + q) * kWide]);
            }
        });
        for (std::size_t l = 0; l < lanes; ++l) {
            eers[active[g0 + l]] = compute_eer(loo_scores(users, [&](std::size_t p, std::size_t q) {
                                                   return p < q ? dist[(p * n + q) * kWide + l]
                                                                : dist[(q * n + p) * kWide + l];
                                               })).eer;
        }
    }
    return eers;
}

FeatureSelection select_features(std::span<const FeatureSequence> corpus, std::span<const std::string> users,
                                 const DtwParams& params) {
    FeatureSelection sel;
    sel.norm_stats = fit_normalizer(corpus);
    std::vector<FeatureSequence> normalized;
    normalized.reserve(corpus.size());
    for (const auto& s : corpus) normalized.push_back(apply_normalizer(s, sel.norm_stats));
    sel.per_feature_eer = all_feature_eers(normalized, users, params);

    double total = 0.0;
    for (std::size_t f = 0; f < sel.per_feature_eer.size(); ++f) {
        if (sel.per_feature_eer[f] < 0.5) {
            sel.kept.push_back(f);
            sel.weights.push_back(std::max(0.5 - sel.per_feature_eer[f], 1e-6));
            total += sel.weights.back();
        }
    }
    if (sel.kept.empty()) {
        std::ostringstream msg;
        msg << "no feature has a single-feature EER below 0.5; EERs:";
        for (std::size_t f = 0; f < sel.per_feature_eer.size(); ++f) msg << ' ' << f << '=' << sel.per_feature_eer[f];
        throw DataError(msg.str());
    }
    for (double& w : sel.weights) w /= total;
    return sel;
}

namespace detail {

const Kernels& kernels() {
    static const Kernels k = [] {
        __builtin_cpu_init();
        const char* force = std::getenv("AIRGATE_DTW_ISA");
        const std::string_view want = force ? force : "";
        if (want == "generic") return Kernels{generic::pack_kernel, generic::lanes_1d_kernel, "generic"};
        if (want == "avx2" && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Kernels{avx2::pack_kernel, avx2::lanes_1d_kernel, "avx2"};
        if (__builtin_cpu_supports("avx512f") && __builtin_cpu_supports("fma")) return Kernels{avx512::pack_kernel, avx512::lanes_1d_kernel, "avx512f"};
        if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Kernels{avx2::pack_kernel, avx2::lanes_1d_kernel, "avx2"};
        return Kernels{generic::pack_kernel, generic::lanes_1d_kernel, "generic"};
    }();
    return k;
}

}  // namespace detail

}  // namespace airgate
