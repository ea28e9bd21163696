#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "airgate/error.hpp"
#include "airgate/sample_io.hpp"
#include "airgate/synth.hpp"
#include "airgate/verifier.hpp"
#include "support.hpp"

using namespace airgate;
namespace fs = std::filesystem;

namespace {

const std::vector<RawSample>& corpus() {
    static const auto c = generate_corpus(test::small_config(4, 6, {GestureType::Circle}), 21);
    return c;
}

std::vector<RawSample> users_except_last() {
    std::vector<RawSample> out;
    for (const RawSample& s : corpus()) {
        if (s.user_id != "u04") out.push_back(s);
    }
    return out;
}

}  // namespace

TEST_CASE("bank is user-major with each user's first T samples") {
    const TemplateBank bank = build_bank(corpus(), 4);
    CHECK(bank.W() == 16);
    CHECK(bank.users == std::vector<std::string>{"u01", "u02", "u03", "u04"});
    CHECK(bank.sample_ids[0] == "u01-circle-b01-s001");
    CHECK(bank.sample_ids[5] == "u02-circle-b01-s002");
    CHECK(bank.template_hash.size() == 64);
    CHECK_THROWS_AS(build_bank(corpus(), 7), DataError);
}

TEST_CASE("template feature matrix is symmetric with a zero diagonal") {
    const AuthSystem sys = train_all(corpus(), {});
    const auto X = bank_features(sys.bank(), sys.selection(), sys.hyperparams().dtw);
    for (std::size_t i = 0; i < X.size(); ++i) {
        CHECK(X[i][i] == 0.0);
        for (std::size_t j = 0; j < X.size(); ++j) CHECK(X[i][j] == X[j][i]);
        CHECK(X[i] == sys.dtw_feature(sys.bank().templates[i]));
    }
}

TEST_CASE("default gamma is the inverse of W times the entry variance") {
    const AuthSystem sys = train_all(corpus(), {});
    const auto X = bank_features(sys.bank(), sys.selection(), sys.hyperparams().dtw);
    double sum = 0, sq = 0, n = 0;
    for (const auto& row : X) {
        for (double v : row) {
            sum += v;
            n += 1;
        }
    }
    for (const auto& row : X) {
        for (double v : row) sq += (v - sum / n) * (v - sum / n);
    }
    CHECK(sys.models()[0].gamma == doctest::Approx(1.0 / (16.0 * sq / n)));
    Hyperparams fixed;
    fixed.gamma = 0.25;
    CHECK(train_all(corpus(), fixed).models()[2].gamma == 0.25);
}

TEST_CASE("every user's templates and held-out samples verify as that user") {
    const AuthSystem sys = train_all(corpus(), {});
    CHECK(sys.M() == 4);
    for (const RawSample& s : corpus()) {
        const auto own = sys.verify(s, s.user_id);
        CHECK(own.accept);
        for (const std::string& other : sys.bank().users) {
            if (other != s.user_id) CHECK(sys.verify(s, other).score < own.score);
        }
    }
    CHECK_THROWS_AS(sys.verify(corpus().front(), "nobody"), UsageError);
    const auto wrong = generate_corpus(test::small_config(2, 1, {GestureType::Swipe}), 1);
    CHECK_THROWS_AS(sys.verify(wrong.front(), "u01"), DataError);
}

TEST_CASE("theta shifts the accept decision") {
    const AuthSystem sys = train_all(corpus(), {});
    const RawSample& s = corpus()[5];
    const double score = sys.verify(s, s.user_id).score;
    CHECK(sys.verify(s, s.user_id, score - 1e-9).accept);
    CHECK(!sys.verify(s, s.user_id, score).accept);
}

TEST_CASE("models survive a save and load bit for bit") {
    const fs::path dir = fs::temp_directory_path() / "airgate_model_test";
    fs::create_directories(dir);
    const fs::path corpus_path = dir / "c.jsonl", model_path = dir / "m.json";
    write_samples(corpus_path, corpus());
    AuthSystem sys = train_all(corpus(), {});
    sys.corpus_path = corpus_path.string();
    sys.corpus_hash = content_hash(corpus());
    save_model(sys, model_path);
    const AuthSystem back = load_model(model_path);
    CHECK(model_to_json(back).dump() == model_to_json(sys).dump());
    for (const RawSample& s : corpus()) CHECK(back.verify(s, "u02").score == sys.verify(s, "u02").score);

    auto tampered = corpus();
    tampered[0].frames[3].pitch += 1e-3;
    write_samples(dir / "t.jsonl", tampered);
    CHECK_THROWS_AS(load_model(model_path, dir / "t.jsonl"), DataError);
    auto j = model_to_json(sys);
    j["version"] = 99;
    CHECK_THROWS_AS(model_from_json(j, corpus_path), DataError);
    fs::remove_all(dir);
}

TEST_CASE("enrollment grows W by T and keeps the selection") {
    const AuthSystem base = train_all(users_except_last(), {});
    CHECK(base.bank().W() == 12);
    std::vector<RawSample> fresh;
    for (const RawSample& s : corpus()) {
        if (s.user_id == "u04") fresh.push_back(s);
    }
    const AuthSystem grown = enroll(base, fresh, 4);
    CHECK(grown.M() == 4);
    CHECK(grown.bank().W() == 16);
    CHECK(grown.selection() == base.selection());
    for (const auto& m : grown.models()) CHECK(m.trained_on_W == 16);
    CHECK(grown.verify(fresh.back(), "u04").accept);
    CHECK_THROWS_AS(enroll(grown, fresh, 4), UsageError);
    CHECK_THROWS_AS(enroll(base, fresh, 3), UsageError);
}

TEST_CASE("training input errors") {
    std::vector<RawSample> one_user;
    for (const RawSample& s : corpus()) {
        if (s.user_id == "u01") one_user.push_back(s);
    }
    CHECK_THROWS_AS(train_all(one_user, {}), DataError);
    auto mixed = corpus();
    mixed[3].gesture = GestureType::Wave;
    CHECK_THROWS_AS(train_all(mixed, {}), DataError);
    Hyperparams h;
    h.C = -1;
    CHECK_THROWS_AS(train_all(corpus(), h), UsageError);
    Hyperparams g;
    g.gamma = 0.5;
    g.dtw.band = 10;
    CHECK(Hyperparams::from_json(nlohmann::json::parse(g.to_json().dump())).to_json() == g.to_json());
}
