#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "airgate/dtw.hpp"
#include "airgate/gesture.hpp"

namespace airgate {

struct Hyperparams {
    std::size_t T = 4;
    double C = 10.0;
    /// RBF width. Unset: 1 / (W * variance of all training feature entries).
    std::optional<double> gamma;
    double tolerance = 1e-3;
    DtwParams dtw;

    nlohmann::ordered_json to_json() const;
    static Hyperparams from_json(const nlohmann::json& j);
};

/// M users x T templates in user-major, template-minor order.
struct TemplateBank {
    std::vector<std::string> users;
    std::size_t T = 0;
    GestureType gesture = GestureType::Swipe;
    std::vector<std::string> sample_ids;     // flat order, W entries
    std::vector<FeatureSequence> templates;  // raw (unnormalized) features, flat order
    std::string template_hash;               // SHA-256 of sample ids and template feature values

    std::size_t W() const { return templates.size(); }
};

/// Users sorted by id; each user's first T samples by sample_id. All samples
/// must share one gesture type.
TemplateBank build_bank(std::span<const RawSample> corpus, std::size_t T);
/// Explicit assignment: per_user[u] holds user u's templates in order.
TemplateBank build_bank(const std::vector<std::string>& users,
                        const std::vector<std::vector<const RawSample*>>& per_user);

struct UserModel {
    std::string user_id;
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> dual_coefficients;  // y_i * alpha_i
    double bias = 0.0;
    double gamma = 1.0;
    std::size_t trained_on_W = 0;
    bool converged = true;
    /// Some alpha sits at its box bound: a training vector is inside the
    /// margin or misclassified.
    bool low_margin = false;
    std::size_t iterations = 0;

    double decision(std::span<const double> features) const;
};

struct VerifyResult {
    bool accept = false;
    double score = 0.0;
};

class AuthSystem {
public:
    AuthSystem() = default;
    AuthSystem(TemplateBank bank, FeatureSelection selection, Hyperparams hyper, std::vector<UserModel> models);

    const TemplateBank& bank() const { return bank_; }
    const FeatureSelection& selection() const { return selection_; }
    const Hyperparams& hyperparams() const { return hyper_; }
    const std::vector<UserModel>& models() const { return models_; }
    const UserModel& model(const std::string& user_id) const;
    std::size_t M() const { return models_.size(); }

    /// DTW distances from the sample to every bank template, in bank order.
    std::vector<double> dtw_feature(const FeatureSequence& raw_features) const;
    std::vector<double> dtw_feature(const RawSample& sample) const;

    /// Decision value of the claimed user's classifier; accept iff score > theta.
    VerifyResult verify(const RawSample& sample, const std::string& claimed_user, double theta = 0.0) const;
    VerifyResult verify_features(std::span<const double> dtw_features, const std::string& claimed_user,
                                 double theta = 0.0) const;

    /// Bookkeeping written into the model file.
    std::string corpus_path;
    std::string corpus_hash;

private:
    TemplateBank bank_;
    FeatureSelection selection_;
    Hyperparams hyper_;
    std::vector<UserModel> models_;
    std::vector<ProjectedSequence> projected_;
    std::shared_ptr<const TemplatePack> pack_;
};

/// W x W matrix of template-to-template DTW distances (row i = dtw_feature of template i).
std::vector<std::vector<double>> bank_features(const TemplateBank& bank, const FeatureSelection& selection,
                                               const DtwParams& params);

/// Selects features on the templates, builds the bank feature vectors and
/// trains one RBF classifier per user (own templates positive, the rest negative).
AuthSystem train_all(std::span<const RawSample> corpus, const Hyperparams& hyper);
AuthSystem train_bank(TemplateBank bank, const Hyperparams& hyper);
/// Retrains every classifier on an existing bank and selection.
AuthSystem retrain(TemplateBank bank, FeatureSelection selection, const Hyperparams& hyper);

/// Appends the new user's first T samples (by sample_id) to the bank, keeps the
/// feature selection, and retrains all classifiers.
AuthSystem enroll(const AuthSystem& system, std::span<const RawSample> new_user_samples, std::size_t T);

nlohmann::ordered_json model_to_json(const AuthSystem& system);
/// Template sequences are re-read from `corpus` (the manifest's corpus path
/// when empty) and checked against the stored template hash.
AuthSystem model_from_json(const nlohmann::json& j, const std::filesystem::path& corpus = {});
void save_model(const AuthSystem& system, const std::filesystem::path& path);
AuthSystem load_model(const std::filesystem::path& path, const std::filesystem::path& corpus = {});

}  // namespace airgate
