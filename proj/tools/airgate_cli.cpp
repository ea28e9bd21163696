// airgate: command-line front end for corpus generation, training,
// verification and the evaluation reports.
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "airgate/corners.hpp"
#include "airgate/error.hpp"
#include "airgate/evaluation.hpp"
#include "airgate/parallel.hpp"
#include "airgate/sample_io.hpp"
#include "airgate/synth.hpp"
#include "airgate/verifier.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace airgate;

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

struct Seed {
    std::uint64_t value = kDefaultSeed;
    std::string source = "default";
};

Seed resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return {*flag, "flag"};
    if (const char* env = std::getenv("AIRGATE_SEED"); env && *env) {
        std::size_t used = 0;
        std::uint64_t v = 0;
        try {
            v = std::stoull(env, &used, 10);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || env[used] != '\0' || env[0] == '-') {
            throw UsageError(std::string("AIRGATE_SEED is not an unsigned integer: '") + env + "'");
        }
        return {v, "env"};
    }
    return {};
}

void echo_seed(const Seed& s) { std::printf("seed %llu (%s)\n", static_cast<unsigned long long>(s.value), s.source.c_str()); }

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

void require_file(const std::string& path, const char* what) {
    if (path.empty()) throw UsageError(std::string(what) + " path is required");
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) throw UsageError(std::string(what) + " not found: " + path);
}

void require_out_file(const std::string& path) {
    const fs::path parent = fs::path(path).parent_path();
    std::error_code ec;
    if (!parent.empty() && !fs::is_directory(parent, ec)) {
        throw UsageError("output directory does not exist: " + parent.string());
    }
}

void prepare_out_dir(const std::string& dir) {
    std::error_code ec;
    if (fs::exists(dir, ec) && !fs::is_directory(dir, ec)) throw UsageError("not a directory: " + dir);
    fs::path p(dir);
    if (!p.has_filename()) p = p.parent_path();
    const fs::path parent = p.parent_path();
    if (!parent.empty() && !fs::is_directory(parent, ec)) {
        throw UsageError("output directory does not exist: " + parent.string());
    }
}

void write_out(const fs::path& path, const std::string& contents) {
    fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
    write_file_atomic(path, contents);
}

void write_json(const fs::path& path, const ordered_json& j) { write_out(path, j.dump(2) + "\n"); }

std::vector<GestureType> parse_gestures(const std::vector<std::string>& names) {
    std::vector<GestureType> out;
    for (const std::string& n : names) {
        const auto g = parse_gesture(n);
        if (!g) throw UsageError("unknown gesture '" + n + "'");
        if (std::find(out.begin(), out.end(), *g) == out.end()) out.push_back(*g);
    }
    return out;
}

/// Requested gestures, or every gesture present in the corpus in canonical order.
std::vector<GestureType> gestures_of(std::span<const RawSample> corpus, const std::vector<std::string>& names) {
    if (!names.empty()) return parse_gestures(names);
    std::vector<GestureType> out;
    for (GestureType g : kAllGestures) {
        if (std::any_of(corpus.begin(), corpus.end(), [&](const RawSample& s) { return s.gesture == g; })) {
            out.push_back(g);
        }
    }
    return out;
}

std::vector<RawSample> only(std::span<const RawSample> corpus, GestureType g) {
    std::vector<RawSample> out;
    for (const RawSample& s : corpus) {
        if (s.gesture == g) out.push_back(s);
    }
    return out;
}

struct HyperFlags {
    std::size_t T = 4;
    double C = 10.0;
    std::optional<double> gamma;
    std::optional<std::size_t> band;

    void add(CLI::App* app) {
        app->add_option("-T,--templates", T, "Templates per user")->capture_default_str()->check(CLI::PositiveNumber);
        app->add_option("-C,--cost", C, "SVM box constraint")->capture_default_str()->check(CLI::PositiveNumber);
        app->add_option("--gamma", gamma, "RBF width (default: 1 / (W * feature variance))")
            ->check(CLI::PositiveNumber);
        app->add_option("--band", band, "Sakoe-Chiba radius in frames (default: unlimited)");
    }
    Hyperparams get() const {
        Hyperparams h;
        h.T = T;
        h.C = C;
        h.gamma = gamma;
        h.dtw.band = band;
        return h;
    }
};

ordered_json corpus_echo(const std::string& path, std::span<const RawSample> corpus) {
    return {{"path", path}, {"samples", corpus.size()}, {"hash", content_hash(corpus)}};
}

ordered_json seed_echo(const Seed& s) { return {{"value", s.value}, {"source", s.source}}; }

// ---------------------------------------------------------------------------

struct GenerateArgs {
    std::string config_path;
    std::string out;
    std::optional<std::size_t> users, samples, batches;
    std::optional<double> noise, drift, damping, separation;
    std::vector<std::string> gestures;
};

int cmd_generate(const GenerateArgs& a, const Seed& seed) {
    require_out_file(a.out);
    SynthConfig c;
    if (!a.config_path.empty()) {
        require_file(a.config_path, "config");
        std::ifstream in(a.config_path);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw UsageError("config " + a.config_path + ": " + e.what());
        }
        c = SynthConfig::from_json(j);
    }
    if (a.users) c.n_users = *a.users;
    if (a.samples) c.samples_per_user_per_batch = *a.samples;
    if (a.batches) c.n_batches = *a.batches;
    if (a.noise) c.noise_sigma = *a.noise;
    if (a.drift) c.drift_rate = *a.drift;
    if (a.damping) c.drift_damping = *a.damping;
    if (a.separation) c.separation = *a.separation;
    if (!a.gestures.empty()) c.gestures = parse_gestures(a.gestures);
    c.validate();

    echo_seed(seed);
    const auto corpus = generate_corpus(c, seed.value);
    const ordered_json meta = {{"generator", "airgate-synth"}, {"seed", seed_echo(seed)}, {"config", c.to_json()}};
    write_samples(fs::path(a.out), corpus, meta);
    std::printf("wrote %zu samples to %s\ncontent hash %s\n", corpus.size(), a.out.c_str(), content_hash(corpus).c_str());
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_extract(const std::string& in, const std::string& out, const Seed& seed) {
    require_file(in, "corpus");
    require_out_file(out);
    echo_seed(seed);
    const auto corpus = read_samples(in);
    std::vector<FeatureSequence> features(corpus.size());
    parallel_for(corpus.size(), [&](std::size_t i) { features[i] = extract_features(corpus[i]); });

    std::string csv = "sample_id,user_id,gesture,batch,frame";
    for (const std::string& name : feature_names()) csv += "," + name;
    csv += "\n";
    char buf[40];
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const RawSample& s = corpus[i];
        const std::string prefix = s.sample_id + "," + s.user_id + "," + std::string(to_string(s.gesture)) + "," +
                                   std::to_string(s.batch) + ",";
        for (std::size_t r = 0; r < features[i].rows(); ++r) {
            csv += prefix + std::to_string(r);
            for (double v : features[i].row(r)) {
                std::snprintf(buf, sizeof buf, ",%.17g", v);
                csv += buf;
            }
            csv += "\n";
        }
    }
    write_out(out, csv);
    std::printf("wrote features of %zu samples to %s\n", corpus.size(), out.c_str());
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_train(const std::string& in, const std::string& gesture, const std::string& out, const HyperFlags& hf,
              const Seed& seed) {
    require_file(in, "corpus");
    require_out_file(out);
    const GestureType g = parse_gestures({gesture}).front();
    echo_seed(seed);
    const auto corpus = only(read_samples(in), g);
    if (corpus.empty()) throw DataError("corpus has no " + gesture + " samples");
    AuthSystem system = train_all(corpus, hf.get());
    system.corpus_path = fs::absolute(in).lexically_normal().string();
    system.corpus_hash = content_hash(corpus);
    save_model(system, out);
    std::size_t weak = 0;
    for (const UserModel& m : system.models()) weak += !m.converged;
    std::printf("trained %zu users, W=%zu, %zu of %zu features kept\n", system.M(), system.bank().W(),
                system.selection().kept.size(), kFeatureCount);
    if (weak) std::printf("warning: %zu classifiers hit the iteration cap\n", weak);
    std::printf("template hash %s\nwrote %s\n", system.bank().template_hash.c_str(), out.c_str());
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_verify(const std::string& model_path, const std::string& corpus_override, const std::string& sample_path,
               const std::string& sample_id, const std::string& user, double theta, const Seed& seed) {
    require_file(model_path, "model");
    require_file(sample_path, "sample file");
    if (!corpus_override.empty()) require_file(corpus_override, "corpus");
    echo_seed(seed);
    const AuthSystem system = load_model(model_path, corpus_override);
    const auto samples = read_samples(sample_path);
    const RawSample* probe = nullptr;
    if (sample_id.empty()) {
        if (samples.size() != 1) {
            throw UsageError("sample file holds " + std::to_string(samples.size()) + " samples; pass --sample-id");
        }
        probe = &samples.front();
    } else {
        for (const RawSample& s : samples) {
            if (s.sample_id == sample_id) probe = &s;
        }
        if (!probe) throw UsageError("no sample '" + sample_id + "' in " + sample_path);
    }
    if (probe->gesture != system.bank().gesture) {
        throw UsageError("sample gesture " + std::string(to_string(probe->gesture)) + " does not match model gesture " +
                         std::string(to_string(system.bank().gesture)));
    }
    const VerifyResult r = system.verify(*probe, user, theta);
    std::printf("score %.17g\n%s\n", r.score, r.accept ? "accept" : "reject");
    return r.accept ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
    std::string corpus;
    std::string out_dir;
    std::vector<std::string> gestures;
    std::size_t folds = 5;
    bool pooled = false;
};

int cmd_evaluate(const EvalArgs& a, const HyperFlags& hf, const Seed& seed) {
    require_file(a.corpus, "corpus");
    prepare_out_dir(a.out_dir);
    if (a.folds < 1) throw UsageError("--folds must be >= 1");
    echo_seed(seed);
    const auto corpus = read_samples(a.corpus);
    const auto gestures = gestures_of(corpus, a.gestures);
    const Hyperparams hyper = hf.get();
    KFoldOptions opts;
    opts.folds = a.folds;
    opts.seed = seed.value;
    opts.pooled = a.pooled;

    std::vector<KFoldResult> results;
    for (GestureType g : gestures) {
        results.push_back(kfold_eer(corpus, g, hyper, opts));
        std::printf("%-7s EER %s\n", std::string(to_string(g)).c_str(), num(results.back().mean_eer).c_str());
    }

    const auto usage = usage_stats(corpus);
    std::vector<GestureUsability> table;
    for (const KFoldResult& r : results) {
        for (const UsageStats& u : usage) {
            if (u.gesture == r.gesture) table.push_back({r.gesture, u.mean_corners, u.mean_frames, r.mean_eer});
        }
    }
    ordered_json fit_json = nullptr;
    std::string notice;
    if (table.size() >= 3) {
        try {
            const UsabilityFit fit = usability_security_fit(table);
            fit_json = to_json(fit);
            write_out(fs::path(a.out_dir) / "fit.csv", fit_csv(fit));
            std::printf("fit r_corners %s r_frames %s\n", num(fit.corners.r).c_str(), num(fit.frames.r).c_str());
        } catch (const DataError& e) {
            notice = std::string("usability fit skipped: ") + e.what();
        }
    } else {
        notice = "usability fit skipped: needs at least three gestures";
    }
    if (!notice.empty()) std::printf("%s\n", notice.c_str());

    ordered_json report;
    report["command"] = "evaluate";
    report["seed"] = seed_echo(seed);
    report["corpus"] = corpus_echo(a.corpus, corpus);
    report["hyperparams"] = hyper.to_json();
    report["folds"] = a.folds;
    report["pooled"] = a.pooled;
    report["eer"] = ordered_json::array();
    for (const KFoldResult& r : results) report["eer"].push_back(to_json(r));
    report["usability"] = ordered_json::array();
    for (const UsageStats& u : usage) report["usability"].push_back(to_json(u));
    report["fit"] = fit_json;
    report["notices"] = notice.empty() ? ordered_json::array() : ordered_json::array({notice});

    write_out(fs::path(a.out_dir) / "eer.csv", eer_csv(results));
    write_out(fs::path(a.out_dir) / "usability.csv", usage_csv(usage));
    for (const KFoldResult& r : results) {
        write_out(fs::path(a.out_dir) / ("pr_" + std::string(to_string(r.gesture)) + ".csv"),
                  pr_csv(precision_recall(r.scores)));
    }
    write_json(fs::path(a.out_dir) / "report.json", report);
    std::printf("reports in %s\n", a.out_dir.c_str());
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_corners(const std::string& in, const std::string& out_dir, const Seed& seed) {
    require_file(in, "corpus");
    prepare_out_dir(out_dir);
    echo_seed(seed);
    const auto corpus = read_samples(in);
    std::vector<CornerResult> found(corpus.size());
    parallel_for(corpus.size(), [&](std::size_t i) { found[i] = detect_corners(corpus[i]); });
    std::string csv = "sample_id,user_id,gesture,batch,frames,corners\n";
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const RawSample& s = corpus[i];
        csv += s.sample_id + "," + s.user_id + "," + std::string(to_string(s.gesture)) + "," + std::to_string(s.batch) +
               "," + std::to_string(frame_count(s)) + "," + std::to_string(found[i].count) + "\n";
    }
    write_out(fs::path(out_dir) / "corners_samples.csv", csv);
    write_out(fs::path(out_dir) / "corners_gestures.csv", usage_csv(usage_stats(corpus)));
    std::printf("corners of %zu samples written to %s\n", corpus.size(), out_dir.c_str());
    return 0;
}

// ---------------------------------------------------------------------------

/// Generator config and seed echoed in a synthetic corpus header.
std::pair<SynthConfig, Seed> generator_of(const SampleFile& file, const std::string& path) {
    const auto& m = file.metadata;
    if (!m.is_object() || !m.contains("config") || !m.contains("seed")) {
        throw DataError(path + ": no generator metadata; attack-sim needs a corpus written by 'generate'");
    }
    try {
        SynthConfig c = SynthConfig::from_json(m.at("config"));
        Seed s{m.at("seed").at("value").get<std::uint64_t>(), "corpus"};
        return {c, s};
    } catch (const UsageError& e) {
        throw DataError(path + ": bad generator metadata: " + e.what());
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": bad generator metadata: " + e.what());
    }
}

struct AttackArgs {
    std::string corpus;
    std::string out_dir;
    std::vector<std::string> gestures;
    std::size_t attempts = 2;
    double theta = 0.0;
};

int cmd_attack_sim(const AttackArgs& a, const HyperFlags& hf) {
    require_file(a.corpus, "corpus");
    prepare_out_dir(a.out_dir);
    if (a.attempts < 1) throw UsageError("--attempts must be >= 1");
    const SampleFile file = read_sample_file(fs::path(a.corpus));
    const auto [config, seed] = generator_of(file, a.corpus);
    echo_seed(seed);
    const auto gestures = gestures_of(file.samples, a.gestures);
    const Hyperparams hyper = hf.get();
    AttackOptions opts;
    opts.attempts = a.attempts;
    opts.theta = a.theta;

    std::vector<AttackResult> results;
    ordered_json report;
    report["command"] = "attack-sim";
    report["seed"] = seed_echo(seed);
    report["corpus"] = corpus_echo(a.corpus, file.samples);
    report["hyperparams"] = hyper.to_json();
    report["attack"] = config.to_json()["attack"];
    report["attempts"] = a.attempts;
    report["theta"] = a.theta;
    report["gestures"] = ordered_json::array();
    for (GestureType g : gestures) {
        results.push_back(attack_simulation(file.samples, config, seed.value, g, hyper, opts));
        const AttackResult& r = results.back();
        const std::string name(to_string(g));
        std::printf("%-7s genuine %s one-obs %s multi-obs %s\n", name.c_str(), num(r.genuine_acceptance).c_str(),
                    num(r.one_observation_acceptance).c_str(), num(r.multi_observation_acceptance).c_str());
        write_out(fs::path(a.out_dir) / ("pr_one_" + name + ".csv"), pr_csv(r.one_observation));
        write_out(fs::path(a.out_dir) / ("pr_multi_" + name + ".csv"), pr_csv(r.multi_observation));
        report["gestures"].push_back(to_json(r));
    }
    write_out(fs::path(a.out_dir) / "attack.csv", attack_csv(results));
    write_json(fs::path(a.out_dir) / "attack.json", report);
    std::printf("reports in %s\n", a.out_dir.c_str());
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_consistency(const std::string& in, const std::string& out_dir, const HyperFlags& hf, const Seed& seed) {
    require_file(in, "corpus");
    prepare_out_dir(out_dir);
    echo_seed(seed);
    const auto corpus = read_samples(in);
    const Hyperparams hyper = hf.get();
    const ConsistencyReport r = consistency_experiment(corpus, hyper);
    for (const std::string& n : r.notices) std::printf("%s\n", n.c_str());
    for (const GestureConsistency& g : r.gestures) {
        std::printf("%-7s", std::string(to_string(g.gesture)).c_str());
        for (const BatchResult& b : g.batches) std::printf(" b%d=%s", b.batch, num(b.eer).c_str());
        std::printf(" rho %s\n", num(g.spearman_rho).c_str());
    }
    ordered_json report;
    report["command"] = "consistency";
    report["seed"] = seed_echo(seed);
    report["corpus"] = corpus_echo(in, corpus);
    report["hyperparams"] = hyper.to_json();
    report["result"] = to_json(r);
    write_out(fs::path(out_dir) / "consistency.csv", consistency_csv(r));
    write_json(fs::path(out_dir) / "consistency.json", report);
    std::printf("reports in %s\n", out_dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"airgate: mid-air gesture authentication with DTW features and per-user SVMs"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", "airgate 1.0.0");

    unsigned threads = 0;
    std::optional<std::uint64_t> seed_flag;
    app.add_option("--threads", threads, "Worker threads (0 = one per hardware thread)")->capture_default_str();
    app.add_option("--seed", seed_flag, "Master seed (falls back to AIRGATE_SEED, then 42)");

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Write a synthetic gesture corpus (JSONL)");
    generate->add_option("--config", gen.config_path, "Generator config JSON; flags below override it");
    generate->add_option("-o,--out", gen.out, "Output corpus path")->required();
    generate->add_option("--users", gen.users, "Number of users");
    generate->add_option("--samples", gen.samples, "Samples per user per gesture per batch");
    generate->add_option("--batches", gen.batches, "Number of batches");
    generate->add_option("--noise", gen.noise, "Intra-user jitter");
    generate->add_option("--drift", gen.drift, "Style drift per batch");
    generate->add_option("--damping", gen.damping, "Fraction of the drift removed");
    generate->add_option("--separation", gen.separation, "Inter-user style spread");
    generate->add_option("--gestures", gen.gestures, "Gestures to generate (default: all)")->delimiter(',');

    std::string in_path, out_path, out_dir, gesture_name;
    auto* extract = app.add_subcommand("extract", "Write the 100 frame features of every sample as CSV");
    extract->add_option("-i,--corpus", in_path, "Input corpus")->required();
    extract->add_option("-o,--out", out_path, "Output CSV")->required();

    HyperFlags hyper;
    auto* train = app.add_subcommand("train", "Train a model for one gesture");
    train->add_option("-i,--corpus", in_path, "Training corpus")->required();
    train->add_option("-g,--gesture", gesture_name, "Gesture type")->required();
    train->add_option("-o,--out", out_path, "Output model JSON")->required();
    hyper.add(train);

    std::string model_path, corpus_override, sample_path, sample_id, user;
    double theta = 0.0;
    auto* verify = app.add_subcommand("verify", "Verify a sample against a claimed user (exit 0 accept, 1 reject)");
    verify->add_option("-m,--model", model_path, "Model JSON")->required();
    verify->add_option("-s,--sample", sample_path, "Sample file (JSONL)")->required();
    verify->add_option("--sample-id", sample_id, "Sample to use when the file holds several");
    verify->add_option("-u,--user", user, "Claimed user id")->required();
    verify->add_option("--theta", theta, "Acceptance threshold on the decision value")->capture_default_str();
    verify->add_option("--corpus", corpus_override, "Corpus holding the templates (default: path in the model)");

    EvalArgs ev;
    auto* evaluate = app.add_subcommand("evaluate", "k-fold EER, PR curves and usability fit");
    evaluate->add_option("-i,--corpus", ev.corpus, "Input corpus")->required();
    evaluate->add_option("-o,--out-dir", ev.out_dir, "Report directory")->required();
    evaluate->add_option("--gestures", ev.gestures, "Gestures to evaluate (default: all present)")->delimiter(',');
    evaluate->add_option("--folds", ev.folds, "Number of folds")->capture_default_str();
    evaluate->add_flag("--pooled", ev.pooled, "Pool all users' scores instead of averaging per-user EERs");
    hyper.add(evaluate);

    auto* corners = app.add_subcommand("corners", "Corner and frame counts per sample and per gesture");
    corners->add_option("-i,--corpus", in_path, "Input corpus")->required();
    corners->add_option("-o,--out-dir", out_dir, "Report directory")->required();

    AttackArgs at;
    auto* attack = app.add_subcommand("attack-sim", "Shoulder-surfing simulation on a generated corpus");
    attack->add_option("-i,--corpus", at.corpus, "Corpus written by 'generate'")->required();
    attack->add_option("-o,--out-dir", at.out_dir, "Report directory")->required();
    attack->add_option("--gestures", at.gestures, "Gestures to attack (default: all present)")->delimiter(',');
    attack->add_option("--attempts", at.attempts, "Attempts per attacker and victim")->capture_default_str();
    attack->add_option("--theta", at.theta, "Acceptance threshold")->capture_default_str();
    hyper.add(attack);

    auto* consistency = app.add_subcommand("consistency", "Per-batch EER with models frozen on batch 1");
    consistency->add_option("-i,--corpus", in_path, "Input corpus")->required();
    consistency->add_option("-o,--out-dir", out_dir, "Report directory")->required();
    hyper.add(consistency);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        set_thread_count(threads);
        if (*generate) return cmd_generate(gen, resolve_seed(seed_flag));
        if (*extract) return cmd_extract(in_path, out_path, resolve_seed(seed_flag));
        if (*train) return cmd_train(in_path, gesture_name, out_path, hyper, resolve_seed(seed_flag));
        if (*verify) return cmd_verify(model_path, corpus_override, sample_path, sample_id, user, theta, resolve_seed(seed_flag));
        if (*evaluate) return cmd_evaluate(ev, hyper, resolve_seed(seed_flag));
        if (*corners) return cmd_corners(in_path, out_dir, resolve_seed(seed_flag));
        if (*attack) {
            if (seed_flag) throw UsageError("attack-sim takes its seed from the corpus; drop --seed");
            return cmd_attack_sim(at, hyper);
        }
        if (*consistency) return cmd_consistency(in_path, out_dir, hyper, resolve_seed(seed_flag));
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const DataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 2;
}
