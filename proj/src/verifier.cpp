#include "airgate/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "airgate/error.hpp"
#include "airgate/parallel.hpp"
#include "airgate/sample_io.hpp"
#include "airgate/svm.hpp"

namespace airgate {

namespace {

using ojson = nlohmann::ordered_json;

constexpr const char* kModelFormat = "airgate-model";
constexpr int kModelVersion = 1;

std::string features_hash(const std::vector<std::string>& ids, const std::vector<FeatureSequence>& seqs) {
    std::string text;
    char buf[32];
    for (std::size_t i = 0; i < seqs.size(); ++i) {
        text += ids[i];
        text += '\n';
        for (double v : seqs[i].values()) {
            std::snprintf(buf, sizeof buf, "%.9e,", v == 0.0 ? 0.0 : v);
            text += buf;
        }
        text += '\n';
    }
    return sha256_hex(text);
}

double entry_variance(const std::vector<std::vector<double>>& X) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& row : X) {
        for (double v : row) sum += v;
        n += row.size();
    }
    const double mu = sum / static_cast<double>(n);
    double ss = 0.0;
    for (const auto& row : X) {
        for (double v : row) ss += (v - mu) * (v - mu);
    }
    return ss / static_cast<double>(n);
}

}  // namespace

ojson Hyperparams::to_json() const {
    ojson j;
    j["T"] = T;
    j["C"] = C;
    j["gamma"] = gamma ? ojson(*gamma) : ojson(nullptr);
    j["tolerance"] = tolerance;
    j["dtw"] = {{"length_normalization", dtw.length_normalization},
                {"band", dtw.band ? ojson(*dtw.band) : ojson(nullptr)}};
    return j;
}

Hyperparams Hyperparams::from_json(const nlohmann::json& j) {
    Hyperparams h;
    h.T = j.at("T").get<std::size_t>();
    h.C = j.at("C").get<double>();
    if (!j.at("gamma").is_null()) h.gamma = j.at("gamma").get<double>();
    h.tolerance = j.value("tolerance", 1e-3);
    if (j.contains("dtw")) {
        h.dtw.length_normalization = j["dtw"].value("length_normalization", true);
        if (j["dtw"].contains("band") && !j["dtw"]["band"].is_null()) h.dtw.band = j["dtw"]["band"].get<std::size_t>();
    }
    if (h.T == 0 || !(h.C > 0) || (h.gamma && !(*h.gamma > 0)) || !(h.tolerance > 0)) {
        throw DataError("hyperparameters out of range");
    }
    return h;
}

TemplateBank build_bank(std::span<const RawSample> corpus, std::size_t T) {
    if (T == 0) throw UsageError("T must be positive");
    if (corpus.empty()) throw DataError("build_bank: empty corpus");
    std::map<std::string, std::vector<const RawSample*>> by_user;
    for (const RawSample& s : corpus) {
        if (s.gesture != corpus.front().gesture) throw DataError("build_bank: corpus mixes gesture types");
        by_user[s.user_id].push_back(&s);
    }
    std::vector<std::string> users;
    std::vector<std::vector<const RawSample*>> per_user;
    for (auto& [user, samples] : by_user) {
        if (samples.size() < T) {
            throw DataError("user '" + user + "' has " + std::to_string(samples.size()) + " samples, T = " +
                            std::to_string(T));
        }
        std::sort(samples.begin(), samples.end(),
                  [](const RawSample* a, const RawSample* b) { return a->sample_id < b->sample_id; });
        samples.resize(T);
        users.push_back(user);
        per_user.push_back(samples);
    }
    return build_bank(users, per_user);
}

TemplateBank build_bank(const std::vector<std::string>& users,
                        const std::vector<std::vector<const RawSample*>>& per_user) {
    if (users.empty() || users.size() != per_user.size()) throw UsageError("build_bank: one template list per user");
    TemplateBank bank;
    bank.users = users;
    bank.T = per_user.front().size();
    if (bank.T == 0) throw UsageError("build_bank: T must be positive");
    bank.gesture = per_user.front().front()->gesture;
    for (std::size_t u = 0; u < users.size(); ++u) {
        if (per_user[u].size() != bank.T) throw DataError("build_bank: every user needs exactly T templates");
        for (const RawSample* s : per_user[u]) {
            if (s->gesture != bank.gesture) throw DataError("build_bank: templates mix gesture types");
            bank.sample_ids.push_back(s->sample_id);
            bank.templates.push_back(extract_features(*s));
        }
    }
    bank.template_hash = features_hash(bank.sample_ids, bank.templates);
    return bank;
}

double UserModel::decision(std::span<const double> features) const {
    if (features.size() != trained_on_W) throw DataError("feature vector length does not match the model's W");
    double s = bias;
    for (std::size_t i = 0; i < support_vectors.size(); ++i) {
        s += dual_coefficients[i] * rbf_kernel(support_vectors[i], features, gamma);
    }
    return s;
}

AuthSystem::AuthSystem(TemplateBank bank, FeatureSelection selection, Hyperparams hyper, std::vector<UserModel> models)
    : bank_(std::move(bank)), selection_(std::move(selection)), hyper_(std::move(hyper)), models_(std::move(models)) {
    if (models_.size() != bank_.users.size()) throw DataError("one model per enrolled user required");
    for (std::size_t u = 0; u < models_.size(); ++u) {
        if (models_[u].user_id != bank_.users[u]) throw DataError("model order does not match bank user order");
        if (models_[u].trained_on_W != bank_.W()) throw DataError("model was trained on a different W");
    }
    projected_.reserve(bank_.W());
    for (const auto& t : bank_.templates) projected_.push_back(project(t, selection_));
    pack_ = std::make_shared<const TemplatePack>(projected_);
}

const UserModel& AuthSystem::model(const std::string& user_id) const {
    for (const UserModel& m : models_) {
        if (m.user_id == user_id) return m;
    }
    throw UsageError("user '" + user_id + "' is not enrolled");
}

std::vector<double> AuthSystem::dtw_feature(const FeatureSequence& raw_features) const {
    if (raw_features.empty()) throw DataError("dtw_feature: empty sample");
    std::vector<double> out(bank_.W());
    pack_->distances(project(raw_features, selection_), hyper_.dtw, out);
    return out;
}

std::vector<double> AuthSystem::dtw_feature(const RawSample& sample) const {
    if (sample.gesture != bank_.gesture) {
        throw DataError("sample gesture '" + std::string(to_string(sample.gesture)) + "' does not match model gesture '" +
                        std::string(to_string(bank_.gesture)) + "'");
    }
    return dtw_feature(extract_features(sample));
}

VerifyResult AuthSystem::verify(const RawSample& sample, const std::string& claimed_user, double theta) const {
    const UserModel& m = model(claimed_user);
    return verify_features(dtw_feature(sample), m.user_id, theta);
}

VerifyResult AuthSystem::verify_features(std::span<const double> dtw_features, const std::string& claimed_user,
                                         double theta) const {
    const double score = model(claimed_user).decision(dtw_features);
    return {score > theta, score};
}

std::vector<std::vector<double>> bank_features(const TemplateBank& bank, const FeatureSelection& selection,
                                               const DtwParams& params) {
    std::vector<ProjectedSequence> projected;
    projected.reserve(bank.W());
    for (const auto& t : bank.templates) projected.push_back(project(t, selection));
    const TemplatePack pack(projected);
    std::vector<std::vector<double>> X(bank.W(), std::vector<double>(bank.W()));
    // DTW is exactly symmetric, so each row only needs the groups at or after
    // its own index; the rest is mirrored.
    parallel_for(bank.W(), [&](std::size_t i) { pack.distances(projected[i], params, X[i], i); });
    for (std::size_t i = 0; i < bank.W(); ++i) {
        for (std::size_t j = 0; j < i; ++j) X[i][j] = X[j][i];
    }
    return X;
}

AuthSystem retrain(TemplateBank bank, FeatureSelection selection, const Hyperparams& hyper) {
    const std::size_t M = bank.users.size();
    const std::size_t W = bank.W();
    if (M < 2) throw DataError("training needs at least 2 users");
    if (!(hyper.C > 0) || hyper.T == 0) throw UsageError("C and T must be positive");

    const auto X = bank_features(bank, selection, hyper.dtw);
    double gamma = 1.0;
    if (hyper.gamma) {
        gamma = *hyper.gamma;
    } else {
        const double var = entry_variance(X);
        if (var > 0) gamma = 1.0 / (static_cast<double>(W) * var);
    }
    std::vector<double> K(W * W);
    for (std::size_t i = 0; i < W; ++i) {
        for (std::size_t j = 0; j < W; ++j) K[i * W + j] = rbf_kernel(X[i], X[j], gamma);
    }

    SmoOptions opts;
    opts.c_pos = hyper.C * static_cast<double>(M - 1);
    opts.c_neg = hyper.C;
    opts.tolerance = hyper.tolerance;

    std::vector<UserModel> models(M);
    parallel_for(M, [&](std::size_t u) {
        std::vector<int> y(W);
        for (std::size_t i = 0; i < W; ++i) y[i] = i / bank.T == u ? 1 : -1;
        const SmoResult r = smo_solve(K, y, opts);
        UserModel& m = models[u];
        m.user_id = bank.users[u];
        m.bias = r.bias;
        m.gamma = gamma;
        m.trained_on_W = W;
        m.converged = r.converged;
        m.iterations = r.iterations;
        for (std::size_t i = 0; i < W; ++i) {
            if (r.alpha[i] <= 0.0) continue;
            m.support_vectors.push_back(X[i]);
            m.dual_coefficients.push_back(y[i] * r.alpha[i]);
            if (r.alpha[i] >= (y[i] > 0 ? opts.c_pos : opts.c_neg)) m.low_margin = true;
        }
    });
    for (const UserModel& m : models) {
        if (!m.converged) {
            std::fprintf(stderr, "warning: classifier for user '%s' stopped at the iteration cap (%zu)\n",
                         m.user_id.c_str(), m.iterations);
        }
    }
    return AuthSystem(std::move(bank), std::move(selection), hyper, std::move(models));
}

AuthSystem train_bank(TemplateBank bank, const Hyperparams& hyper) {
    if (bank.users.size() < 2) throw DataError("training needs at least 2 users");
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < bank.W(); ++i) labels.push_back(bank.users[i / bank.T]);
    FeatureSelection sel = select_features(bank.templates, labels, hyper.dtw);
    return retrain(std::move(bank), std::move(sel), hyper);
}

AuthSystem train_all(std::span<const RawSample> corpus, const Hyperparams& hyper) {
    AuthSystem sys = train_bank(build_bank(corpus, hyper.T), hyper);
    sys.corpus_hash = content_hash(corpus);
    return sys;
}

AuthSystem enroll(const AuthSystem& system, std::span<const RawSample> new_user_samples, std::size_t T) {
    if (new_user_samples.empty()) throw DataError("enroll: no samples");
    if (T != system.bank().T) throw UsageError("enroll: T must match the system's T");
    const std::string& user = new_user_samples.front().user_id;
    for (const RawSample& s : new_user_samples) {
        if (s.user_id != user) throw DataError("enroll: samples belong to more than one user");
    }
    const auto& users = system.bank().users;
    if (std::find(users.begin(), users.end(), user) != users.end()) {
        throw UsageError("enroll: user '" + user + "' is already enrolled");
    }
    TemplateBank fresh = build_bank(new_user_samples, T);
    if (fresh.gesture != system.bank().gesture) throw DataError("enroll: gesture type differs from the system's");

    TemplateBank bank = system.bank();
    bank.users.push_back(user);
    bank.sample_ids.insert(bank.sample_ids.end(), fresh.sample_ids.begin(), fresh.sample_ids.end());
    bank.templates.insert(bank.templates.end(), fresh.templates.begin(), fresh.templates.end());
    bank.template_hash = features_hash(bank.sample_ids, bank.templates);
    AuthSystem out = retrain(std::move(bank), system.selection(), system.hyperparams());
    out.corpus_path = system.corpus_path;
    out.corpus_hash = system.corpus_hash;
    return out;
}

ojson model_to_json(const AuthSystem& system) {
    const TemplateBank& bank = system.bank();
    ojson j;
    j["format"] = kModelFormat;
    j["version"] = kModelVersion;
    j["gesture"] = std::string(to_string(bank.gesture));
    j["hyperparams"] = system.hyperparams().to_json();
    j["selection"] = system.selection().to_json();
    j["bank_manifest"] = {{"user_ids", bank.users},
                          {"T", bank.T},
                          {"sample_ids", bank.sample_ids},
                          {"corpus", system.corpus_path},
                          {"template_hash", bank.template_hash}};
    j["provenance"] = {{"corpus_hash", system.corpus_hash}, {"hyperparams", system.hyperparams().to_json()}};
    ojson models = ojson::array();
    for (const UserModel& m : system.models()) {
        models.push_back({{"user_id", m.user_id},
                          {"support_vectors", m.support_vectors},
                          {"dual_coefficients", m.dual_coefficients},
                          {"bias", m.bias},
                          {"gamma", m.gamma},
                          {"trained_on_W", m.trained_on_W},
                          {"converged", m.converged},
                          {"low_margin", m.low_margin},
                          {"iterations", m.iterations}});
    }
    j["models"] = std::move(models);
    return j;
}

AuthSystem model_from_json(const nlohmann::json& j, const std::filesystem::path& corpus) {
    try {
        if (j.value("format", "") != kModelFormat) throw DataError("not an airgate-model document");
        if (j.value("version", 0) != kModelVersion) throw DataError("unsupported model version");
        const auto gesture = parse_gesture(j.at("gesture").get<std::string>());
        if (!gesture) throw DataError("unknown gesture in model");
        const Hyperparams hyper = Hyperparams::from_json(j.at("hyperparams"));
        const FeatureSelection sel = FeatureSelection::from_json(j.at("selection"));
        const auto& manifest = j.at("bank_manifest");

        TemplateBank bank;
        bank.users = manifest.at("user_ids").get<std::vector<std::string>>();
        bank.T = manifest.at("T").get<std::size_t>();
        bank.gesture = *gesture;
        bank.sample_ids = manifest.at("sample_ids").get<std::vector<std::string>>();
        if (bank.T == 0 || bank.sample_ids.size() != bank.users.size() * bank.T) {
            throw DataError("bank manifest: sample_ids must list T templates per user");
        }
        const std::filesystem::path corpus_path =
            corpus.empty() ? std::filesystem::path(manifest.at("corpus").get<std::string>()) : corpus;
        const auto samples = read_samples(corpus_path);
        std::map<std::string, const RawSample*> by_id;
        for (const RawSample& s : samples) by_id[s.sample_id] = &s;
        for (std::size_t i = 0; i < bank.sample_ids.size(); ++i) {
            const auto it = by_id.find(bank.sample_ids[i]);
            if (it == by_id.end()) throw DataError("template '" + bank.sample_ids[i] + "' not found in corpus");
            if (it->second->user_id != bank.users[i / bank.T]) {
                throw DataError("template '" + bank.sample_ids[i] + "' belongs to another user");
            }
            bank.templates.push_back(extract_features(*it->second));
        }
        bank.template_hash = features_hash(bank.sample_ids, bank.templates);
        if (bank.template_hash != manifest.at("template_hash").get<std::string>()) {
            throw DataError("template hash mismatch: corpus differs from the one the model was trained on");
        }

        std::vector<UserModel> models;
        for (const auto& mj : j.at("models")) {
            UserModel m;
            m.user_id = mj.at("user_id").get<std::string>();
            m.support_vectors = mj.at("support_vectors").get<std::vector<std::vector<double>>>();
            m.dual_coefficients = mj.at("dual_coefficients").get<std::vector<double>>();
            m.bias = mj.at("bias").get<double>();
            m.gamma = mj.at("gamma").get<double>();
            m.trained_on_W = mj.at("trained_on_W").get<std::size_t>();
            m.converged = mj.value("converged", true);
            m.low_margin = mj.value("low_margin", false);
            m.iterations = mj.value("iterations", std::size_t{0});
            if (m.support_vectors.size() != m.dual_coefficients.size()) {
                throw DataError("model '" + m.user_id + "': support vector count mismatch");
            }
            for (const auto& sv : m.support_vectors) {
                if (sv.size() != m.trained_on_W) throw DataError("model '" + m.user_id + "': bad support vector");
            }
            models.push_back(std::move(m));
        }
        AuthSystem sys(std::move(bank), sel, hyper, std::move(models));
        sys.corpus_path = corpus_path.string();
        sys.corpus_hash = j.contains("provenance") ? j["provenance"].value("corpus_hash", "") : "";
        return sys;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed model: ") + e.what());
    }
}

void save_model(const AuthSystem& system, const std::filesystem::path& path) {
    write_file_atomic(path, model_to_json(system).dump(1) + "\n");
}

AuthSystem load_model(const std::filesystem::path& path, const std::filesystem::path& corpus) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw DataError("model file " + path.string() + ": " + e.what());
    }
    return model_from_json(j, corpus);
}

}  // namespace airgate
