#include "airgate/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>

#include "airgate/error.hpp"
#include "airgate/parallel.hpp"
#include "airgate/sample_io.hpp"

namespace airgate {

namespace {

using ojson = nlohmann::ordered_json;

std::map<std::string, std::vector<const RawSample*>> group_by_user(std::span<const RawSample> corpus,
                                                                   GestureType g) {
    std::map<std::string, std::vector<const RawSample*>> by_user;
    for (const RawSample& s : corpus) {
        if (s.gesture == g) by_user[s.user_id].push_back(&s);
    }
    for (auto& [user, v] : by_user) {
        std::sort(v.begin(), v.end(), [](const RawSample* a, const RawSample* b) { return a->sample_id < b->sample_id; });
    }
    return by_user;
}

std::vector<std::vector<double>> features_of(const AuthSystem& system, std::span<const RawSample* const> samples) {
    std::vector<std::vector<double>> out(samples.size());
    parallel_for(samples.size(), [&](std::size_t i) { out[i] = system.dtw_feature(*samples[i]); });
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

ojson curve_json(std::span<const PrPoint> curve) {
    ojson a = ojson::array();
    for (const PrPoint& p : curve) a.push_back({{"theta", p.theta}, {"precision", p.precision}, {"recall", p.recall}});
    return a;
}

}  // namespace

std::vector<ScoreSet> score_per_user(const AuthSystem& system, std::span<const RawSample* const> tests) {
    const auto features = features_of(system, tests);
    std::vector<ScoreSet> per_user(system.M());
    for (std::size_t u = 0; u < system.M(); ++u) {
        const UserModel& m = system.models()[u];
        for (std::size_t i = 0; i < tests.size(); ++i) {
            const double s = m.decision(features[i]);
            (tests[i]->user_id == m.user_id ? per_user[u].genuine : per_user[u].impostor).push_back(s);
        }
    }
    return per_user;
}

double aggregate_eer(std::span<const ScoreSet> per_user, bool pooled) {
    if (per_user.empty()) throw DataError("no users to evaluate");
    if (pooled) {
        ScoreSet all;
        for (const ScoreSet& s : per_user) {
            all.genuine.insert(all.genuine.end(), s.genuine.begin(), s.genuine.end());
            all.impostor.insert(all.impostor.end(), s.impostor.begin(), s.impostor.end());
        }
        return compute_eer(all).eer;
    }
    double sum = 0.0;
    for (const ScoreSet& s : per_user) sum += compute_eer(s).eer;
    return sum / static_cast<double>(per_user.size());
}

KFoldResult kfold_eer(std::span<const RawSample> corpus, GestureType g, const Hyperparams& hyper,
                      const KFoldOptions& opts) {
    if (opts.folds < 1) throw UsageError("folds must be >= 1");
    const auto by_user = group_by_user(corpus, g);
    if (by_user.size() < 2) throw DataError("kfold_eer: gesture '" + std::string(to_string(g)) + "' needs >= 2 users");
    std::vector<std::vector<const RawSample*>> shuffled;
    std::vector<std::string> users;
    for (const auto& [user, samples] : by_user) {
        if (samples.size() < hyper.T + 1) {
            throw DataError("kfold_eer: user '" + user + "' has " + std::to_string(samples.size()) +
                            " samples of '" + std::string(to_string(g)) + "', needs at least T + 1 = " +
                            std::to_string(hyper.T + 1));
        }
        auto perm = samples;
        std::mt19937_64 rng(derive_seed(opts.seed, "kfold/" + std::string(to_string(g)) + "/" + user));
        // Fisher-Yates with an explicit draw so the order is portable.
        for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng() % i]);
        shuffled.push_back(std::move(perm));
        users.push_back(user);
    }

    KFoldResult result;
    result.gesture = g;
    result.users = users.size();
    result.scores.resize(users.size());
    for (std::size_t f = 0; f < opts.folds; ++f) {
        std::vector<std::vector<const RawSample*>> templates(users.size());
        std::vector<const RawSample*> tests;
        for (std::size_t u = 0; u < users.size(); ++u) {
            const auto& perm = shuffled[u];
            const std::size_t n = perm.size();
            std::vector<bool> is_template(n, false);
            for (std::size_t k = 0; k < hyper.T; ++k) is_template[(f * hyper.T + k) % n] = true;
            for (std::size_t k = 0; k < hyper.T; ++k) templates[u].push_back(perm[(f * hyper.T + k) % n]);
            for (std::size_t i = 0; i < n; ++i) {
                if (!is_template[i]) tests.push_back(perm[i]);
            }
        }
        const AuthSystem system = train_bank(build_bank(users, templates), hyper);
        const auto per_user = score_per_user(system, tests);
        for (std::size_t u = 0; u < per_user.size(); ++u) {
            const ScoreSet& s = per_user[u];
            result.genuine_trials += s.genuine.size();
            result.impostor_trials += s.impostor.size();
            auto& acc = result.scores[u];
            acc.genuine.insert(acc.genuine.end(), s.genuine.begin(), s.genuine.end());
            acc.impostor.insert(acc.impostor.end(), s.impostor.begin(), s.impostor.end());
        }
        result.fold_eers.push_back(aggregate_eer(per_user, opts.pooled));
    }
    result.mean_eer = mean(result.fold_eers);
    return result;
}

std::vector<UsageStats> usage_stats(std::span<const RawSample> corpus, const CornerParams& params) {
    std::vector<std::size_t> corners(corpus.size());
    parallel_for(corpus.size(), [&](std::size_t i) { corners[i] = detect_corners(corpus[i], params).count; });
    std::vector<UsageStats> out;
    for (GestureType g : kAllGestures) {
        UsageStats s;
        s.gesture = g;
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            if (corpus[i].gesture != g) continue;
            ++s.samples;
            s.mean_corners += static_cast<double>(corners[i]);
            s.mean_frames += static_cast<double>(frame_count(corpus[i]));
        }
        if (s.samples == 0) continue;
        s.mean_corners /= static_cast<double>(s.samples);
        s.mean_frames /= static_cast<double>(s.samples);
        out.push_back(s);
    }
    return out;
}

UsabilityFit usability_security_fit(std::span<const GestureUsability> table) {
    if (table.size() < 3) throw UsageError("usability_security_fit needs at least 3 gesture types");
    std::vector<double> c, f, e;
    for (const GestureUsability& row : table) {
        c.push_back(row.mean_corners);
        f.push_back(row.mean_frames);
        e.push_back(row.eer);
    }
    return {fit_line(c, e), fit_line(f, e)};
}

ConsistencyReport consistency_experiment(std::span<const RawSample> corpus, const Hyperparams& hyper,
                                         const CornerParams& corner_params) {
    ConsistencyReport report;
    for (const RawSample& s : corpus) {
        if (s.batch > kMaxBatches) {
            throw DataError("sample '" + s.sample_id + "' has batch " + std::to_string(s.batch) + ", maximum is " +
                            std::to_string(kMaxBatches));
        }
    }
    for (GestureType g : kAllGestures) {
        const auto by_user = group_by_user(corpus, g);
        if (by_user.empty()) continue;
        std::vector<std::string> users;
        std::vector<std::vector<const RawSample*>> templates;
        std::map<int, std::vector<const RawSample*>> by_batch;
        for (const auto& [user, samples] : by_user) {
            std::vector<const RawSample*> first;
            for (const RawSample* s : samples) {
                if (s->batch == 1 && first.size() < hyper.T) {
                    first.push_back(s);
                } else {
                    by_batch[s->batch].push_back(s);
                }
            }
            if (first.size() < hyper.T) {
                throw DataError("consistency: user '" + user + "' has fewer than T batch-1 samples of '" +
                                std::string(to_string(g)) + "'");
            }
            users.push_back(user);
            templates.push_back(std::move(first));
        }
        if (users.size() < 2) throw DataError("consistency: gesture '" + std::string(to_string(g)) + "' needs >= 2 users");
        const AuthSystem system = train_bank(build_bank(users, templates), hyper);

        GestureConsistency gc;
        gc.gesture = g;
        const int last = by_batch.empty() ? 1 : by_batch.rbegin()->first;
        for (int b = 1; b <= last; ++b) {
            const auto it = by_batch.find(b);
            if (it == by_batch.end()) {
                report.notices.push_back("gesture '" + std::string(to_string(g)) + "': batch " + std::to_string(b) +
                                         " has no test samples, skipped");
                continue;
            }
            const auto& tests = it->second;
            const auto per_user = score_per_user(system, tests);
            if (std::any_of(per_user.begin(), per_user.end(),
                            [](const ScoreSet& s) { return s.genuine.empty() || s.impostor.empty(); })) {
                report.notices.push_back("gesture '" + std::string(to_string(g)) + "': batch " + std::to_string(b) +
                                         " lacks samples for some user, skipped");
                continue;
            }
            BatchResult br;
            br.batch = b;
            br.samples = tests.size();
            br.eer = aggregate_eer(per_user, false);
            std::vector<double> frames, corners(tests.size());
            parallel_for(tests.size(), [&](std::size_t i) {
                corners[i] = static_cast<double>(detect_corners(*tests[i], corner_params).count);
            });
            for (const RawSample* s : tests) frames.push_back(static_cast<double>(frame_count(*s)));
            br.mean_frames = mean(frames);
            br.mean_corners = mean(corners);
            gc.batches.push_back(br);
        }
        if (gc.batches.size() >= 2) {
            std::vector<double> idx, eer;
            for (const BatchResult& br : gc.batches) {
                idx.push_back(br.batch);
                eer.push_back(br.eer);
            }
            // A flat EER series has no trend; spearman would divide by zero.
            const bool flat = std::all_of(eer.begin(), eer.end(), [&](double e) { return e == eer.front(); });
            gc.spearman_rho = flat ? 0.0 : spearman(idx, eer);
        }
        report.gestures.push_back(std::move(gc));
    }
    return report;
}

double mean_eer_over(const GestureConsistency& g, int first, int last) {
    std::vector<double> v;
    for (const BatchResult& b : g.batches) {
        if (b.batch >= first && b.batch <= last) v.push_back(b.eer);
    }
    if (v.empty()) throw DataError("no batches in the requested range");
    return mean(v);
}

AttackResult attack_simulation(std::span<const RawSample> corpus, const SynthConfig& config, std::uint64_t seed,
                               GestureType g, const Hyperparams& hyper, const AttackOptions& opts) {
    if (opts.attempts < 1) throw UsageError("attempts must be >= 1");
    const auto by_user = group_by_user(corpus, g);
    std::map<std::string, std::size_t> index;
    for (std::size_t u = 0; u < config.n_users; ++u) index[user_id(config, u)] = u;

    std::vector<std::string> users;
    std::vector<std::vector<const RawSample*>> templates;
    std::vector<const RawSample*> genuine;
    for (const auto& [user, samples] : by_user) {
        if (!index.count(user)) throw DataError("attack-sim: user '" + user + "' is not part of the generator config");
        if (samples.size() < hyper.T + 1) throw DataError("attack-sim: user '" + user + "' needs at least T + 1 samples");
        users.push_back(user);
        templates.emplace_back(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(hyper.T));
        genuine.insert(genuine.end(), samples.begin() + static_cast<std::ptrdiff_t>(hyper.T), samples.end());
    }
    if (users.size() < 2) throw DataError("attack-sim: gesture '" + std::string(to_string(g)) + "' needs >= 2 users");
    const AuthSystem system = train_bank(build_bank(users, templates), hyper);

    const std::size_t M = users.size();
    const auto genuine_features = features_of(system, genuine);
    std::vector<ScoreSet> one(M), many(M);
    for (std::size_t i = 0; i < genuine.size(); ++i) {
        const std::size_t u = static_cast<std::size_t>(
            std::find(users.begin(), users.end(), genuine[i]->user_id) - users.begin());
        const double s = system.models()[u].decision(genuine_features[i]);
        one[u].genuine.push_back(s);
        many[u].genuine.push_back(s);
    }

    struct Trial {
        std::size_t victim, attacker, attempt;
    };
    std::vector<Trial> trials;
    for (std::size_t v = 0; v < M; ++v) {
        for (std::size_t a = 0; a < M; ++a) {
            if (a == v) continue;
            for (std::size_t k = 0; k < opts.attempts; ++k) trials.push_back({v, a, k});
        }
    }
    std::vector<double> s_one(trials.size()), s_many(trials.size());
    parallel_for(trials.size(), [&](std::size_t i) {
        const Trial& t = trials[i];
        const std::size_t vi = index.at(users[t.victim]), ai = index.at(users[t.attacker]);
        const UserModel& m = system.models()[t.victim];
        const RawSample a1 = generate_attack(config, seed, vi, ai, g, t.attempt, Observations::One);
        const RawSample am = generate_attack(config, seed, vi, ai, g, t.attempt, Observations::Many);
        s_one[i] = m.decision(system.dtw_feature(a1));
        s_many[i] = m.decision(system.dtw_feature(am));
    });
    std::size_t above = 0;
    for (std::size_t i = 0; i < trials.size(); ++i) {
        one[trials[i].victim].impostor.push_back(s_one[i]);
        many[trials[i].victim].impostor.push_back(s_many[i]);
        if (s_many[i] > s_one[i]) ++above;
    }

    AttackResult r;
    r.gesture = g;
    r.one_observation = precision_recall(one);
    r.multi_observation = precision_recall(many);
    r.genuine_trials = genuine.size();
    r.attack_trials = trials.size();
    r.multi_above_one = static_cast<double>(above) / static_cast<double>(trials.size());
    std::size_t ga = 0, oa = 0, ma = 0;
    for (const EvalCounts& c : counts_at(one, opts.theta)) {
        ga += c.tp;
        oa += c.fp;
    }
    for (const EvalCounts& c : counts_at(many, opts.theta)) ma += c.fp;
    r.genuine_acceptance = static_cast<double>(ga) / static_cast<double>(genuine.size());
    r.one_observation_acceptance = static_cast<double>(oa) / static_cast<double>(trials.size());
    r.multi_observation_acceptance = static_cast<double>(ma) / static_cast<double>(trials.size());
    return r;
}

ojson to_json(const KFoldResult& r) {
    return {{"gesture", std::string(to_string(r.gesture))}, {"mean_eer", r.mean_eer},
            {"fold_eers", r.fold_eers},                     {"users", r.users},
            {"genuine_trials", r.genuine_trials},           {"impostor_trials", r.impostor_trials}};
}

ojson to_json(const UsageStats& s) {
    return {{"gesture", std::string(to_string(s.gesture))},
            {"samples", s.samples},
            {"mean_corners", s.mean_corners},
            {"mean_frames", s.mean_frames}};
}

ojson to_json(const UsabilityFit& f) {
    auto line = [](const LineFit& l) { return ojson{{"r", l.r}, {"slope", l.slope}, {"intercept", l.intercept}}; };
    return {{"corners", line(f.corners)}, {"frames", line(f.frames)}};
}

ojson to_json(const ConsistencyReport& r) {
    ojson gs = ojson::array();
    for (const GestureConsistency& g : r.gestures) {
        ojson bs = ojson::array();
        for (const BatchResult& b : g.batches) {
            bs.push_back({{"batch", b.batch},
                          {"eer", b.eer},
                          {"mean_frames", b.mean_frames},
                          {"mean_corners", b.mean_corners},
                          {"samples", b.samples}});
        }
        gs.push_back({{"gesture", std::string(to_string(g.gesture))}, {"spearman_rho", g.spearman_rho}, {"batches", bs}});
    }
    return {{"gestures", gs}, {"notices", r.notices}};
}

ojson to_json(const AttackResult& r) {
    return {{"gesture", std::string(to_string(r.gesture))},
            {"genuine_trials", r.genuine_trials},
            {"attack_trials", r.attack_trials},
            {"genuine_acceptance", r.genuine_acceptance},
            {"one_observation_acceptance", r.one_observation_acceptance},
            {"multi_observation_acceptance", r.multi_observation_acceptance},
            {"multi_above_one", r.multi_above_one},
            {"one_observation", curve_json(r.one_observation)},
            {"multi_observation", curve_json(r.multi_observation)}};
}

std::string eer_csv(std::span<const KFoldResult> results) {
    std::string out = "gesture,metric,value\n";
    for (const KFoldResult& r : results) {
        const std::string g(to_string(r.gesture));
        out += g + ",mean_eer," + fmt(r.mean_eer) + "\n";
        for (std::size_t f = 0; f < r.fold_eers.size(); ++f) {
            out += g + ",fold" + std::to_string(f + 1) + "_eer," + fmt(r.fold_eers[f]) + "\n";
        }
    }
    return out;
}

std::string usage_csv(std::span<const UsageStats> stats) {
    std::string out = "gesture,metric,value\n";
    for (const UsageStats& s : stats) {
        const std::string g(to_string(s.gesture));
        out += g + ",mean_corners," + fmt(s.mean_corners) + "\n";
        out += g + ",mean_frames," + fmt(s.mean_frames) + "\n";
    }
    return out;
}

std::string fit_csv(const UsabilityFit& fit) {
    std::string out = "fit,r,slope,intercept\n";
    out += "corners," + fmt(fit.corners.r) + "," + fmt(fit.corners.slope) + "," + fmt(fit.corners.intercept) + "\n";
    out += "frames," + fmt(fit.frames.r) + "," + fmt(fit.frames.slope) + "," + fmt(fit.frames.intercept) + "\n";
    return out;
}

std::string consistency_csv(const ConsistencyReport& report) {
    std::string out = "gesture,batch,eer,mean_frames,mean_corners,samples\n";
    for (const GestureConsistency& g : report.gestures) {
        for (const BatchResult& b : g.batches) {
            out += std::string(to_string(g.gesture)) + "," + std::to_string(b.batch) + "," + fmt(b.eer) + "," +
                   fmt(b.mean_frames) + "," + fmt(b.mean_corners) + "," + std::to_string(b.samples) + "\n";
        }
    }
    return out;
}

std::string attack_csv(std::span<const AttackResult> results) {
    std::string out = "gesture,metric,value\n";
    for (const AttackResult& r : results) {
        const std::string g(to_string(r.gesture));
        out += g + ",genuine_acceptance," + fmt(r.genuine_acceptance) + "\n";
        out += g + ",one_observation_acceptance," + fmt(r.one_observation_acceptance) + "\n";
        out += g + ",multi_observation_acceptance," + fmt(r.multi_observation_acceptance) + "\n";
        out += g + ",multi_above_one," + fmt(r.multi_above_one) + "\n";
    }
    return out;
}

}  // namespace airgate
