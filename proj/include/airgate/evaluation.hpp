#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "airgate/corners.hpp"
#include "airgate/gesture.hpp"
#include "airgate/metrics.hpp"
#include "airgate/synth.hpp"
#include "airgate/verifier.hpp"

namespace airgate {

struct KFoldOptions {
    std::size_t folds = 5;
    std::uint64_t seed = 42;
    /// Pool every user's scores into one set instead of averaging per-user EERs.
    bool pooled = false;
};

struct KFoldResult {
    GestureType gesture = GestureType::Swipe;
    double mean_eer = 0.0;
    std::vector<double> fold_eers;
    std::size_t users = 0;
    std::size_t genuine_trials = 0;
    std::size_t impostor_trials = 0;
    /// Per-user scores accumulated over all folds, users in id order.
    std::vector<ScoreSet> scores;
};

/// Per user, the samples of gesture g are shuffled with a seeded permutation;
/// fold f takes the T samples at positions f*T .. f*T+T-1 (cyclically) as
/// templates and the rest as test samples. A fresh system is trained per fold.
KFoldResult kfold_eer(std::span<const RawSample> corpus, GestureType g, const Hyperparams& hyper,
                      const KFoldOptions& opts = {});

/// Scores of every test sample against every model of `system`: per_user[u]
/// holds user u's own samples as genuine and the other users' as impostors.
std::vector<ScoreSet> score_per_user(const AuthSystem& system, std::span<const RawSample* const> tests);
/// Mean of the per-user EERs, or the EER of the pooled scores.
double aggregate_eer(std::span<const ScoreSet> per_user, bool pooled);

struct UsageStats {
    GestureType gesture = GestureType::Swipe;
    std::size_t samples = 0;
    double mean_corners = 0.0;
    double mean_frames = 0.0;
};

/// Mean corner and frame counts per gesture present in the corpus, in gesture order.
std::vector<UsageStats> usage_stats(std::span<const RawSample> corpus, const CornerParams& params = {});

struct GestureUsability {
    GestureType gesture = GestureType::Swipe;
    double mean_corners = 0.0;
    double mean_frames = 0.0;
    double eer = 0.0;
};

struct UsabilityFit {
    LineFit corners;  // EER against mean corners
    LineFit frames;   // EER against mean frames
};

/// Needs at least three gestures; zero-variance inputs raise DataError.
UsabilityFit usability_security_fit(std::span<const GestureUsability> table);

struct BatchResult {
    int batch = 1;
    double eer = 0.0;
    double mean_frames = 0.0;
    double mean_corners = 0.0;
    std::size_t samples = 0;
};

struct GestureConsistency {
    GestureType gesture = GestureType::Swipe;
    /// Batch 1 entry is the baseline (training batch minus the templates).
    std::vector<BatchResult> batches;
    /// Spearman correlation of batch index and EER over all listed batches;
    /// 0 when the EER is the same for every batch.
    double spearman_rho = 0.0;
};

inline constexpr int kMaxBatches = 13;

struct ConsistencyReport {
    std::vector<GestureConsistency> gestures;
    std::vector<std::string> notices;
};

/// Trains on the first T batch-1 samples of every user (by sample_id) and
/// evaluates each batch with the frozen models. Batches with no samples for a
/// gesture are skipped with a notice.
ConsistencyReport consistency_experiment(std::span<const RawSample> corpus, const Hyperparams& hyper,
                                         const CornerParams& corners = {});
/// Mean EER over batches in [first, last].
double mean_eer_over(const GestureConsistency& g, int first, int last);

struct AttackOptions {
    std::size_t attempts = 2;
    double theta = 0.0;
};

struct AttackResult {
    GestureType gesture = GestureType::Swipe;
    std::vector<PrPoint> one_observation;
    std::vector<PrPoint> multi_observation;
    double genuine_acceptance = 0.0;
    double one_observation_acceptance = 0.0;
    double multi_observation_acceptance = 0.0;
    std::size_t genuine_trials = 0;
    std::size_t attack_trials = 0;  // per observation mode
    /// Fraction of attacker/victim/attempt triples where the multi-observation
    /// attack scored above the one-observation attack.
    double multi_above_one = 0.0;
};

/// Victims are modelled on their first T samples; the remaining samples are
/// genuine trials. Every other user attacks every victim `attempts` times under
/// both observation modes. The corpus must be the output of generate_corpus
/// with the same config and seed.
AttackResult attack_simulation(std::span<const RawSample> corpus, const SynthConfig& config, std::uint64_t seed,
                               GestureType g, const Hyperparams& hyper, const AttackOptions& opts = {});

/// Reports. JSON numbers keep full precision; CSV uses %.6f.
nlohmann::ordered_json to_json(const KFoldResult& r);
nlohmann::ordered_json to_json(const UsageStats& s);
nlohmann::ordered_json to_json(const UsabilityFit& f);
nlohmann::ordered_json to_json(const ConsistencyReport& r);
nlohmann::ordered_json to_json(const AttackResult& r);

std::string eer_csv(std::span<const KFoldResult> results);
std::string usage_csv(std::span<const UsageStats> stats);
std::string fit_csv(const UsabilityFit& fit);
std::string consistency_csv(const ConsistencyReport& report);
std::string attack_csv(std::span<const AttackResult> results);

}  // namespace airgate
