#include <doctest.h>

#include <algorithm>

#include "airgate/error.hpp"
#include "airgate/evaluation.hpp"
#include "airgate/synth.hpp"
#include "support.hpp"

using namespace airgate;

TEST_CASE("k-fold on a separable corpus") {
    const auto corpus = generate_corpus(test::small_config(4, 7, {GestureType::Abc}), 2);
    Hyperparams h;
    h.T = 3;
    KFoldOptions o;
    o.folds = 3;
    const KFoldResult r = kfold_eer(corpus, GestureType::Abc, h, o);
    CHECK(r.fold_eers.size() == 3);
    CHECK(r.mean_eer == 0.0);
    CHECK(r.users == 4);
    CHECK(r.genuine_trials == 3 * 4 * 4);
    CHECK(r.impostor_trials == 3 * 4 * 4 * 3);
    CHECK(r.scores.size() == 4);
    const KFoldResult again = kfold_eer(corpus, GestureType::Abc, h, o);
    CHECK(to_json(again).dump() == to_json(r).dump());
    h.T = 7;
    CHECK_THROWS_AS(kfold_eer(corpus, GestureType::Abc, h, o), DataError);
    CHECK_THROWS_AS(kfold_eer(corpus, GestureType::Swipe, {}, o), DataError);
}

TEST_CASE("users that are clones of each other cannot be told apart") {
    SynthConfig c = test::small_config(8, 10, {GestureType::Swipe});
    c.separation = 0.0;
    const auto corpus = generate_corpus(c, 6);
    const double eer = kfold_eer(corpus, GestureType::Swipe, {}).mean_eer;
    CHECK(eer >= 0.4);
    CHECK(eer <= 0.6);
}

TEST_CASE("per-user and pooled aggregation") {
    const std::vector<ScoreSet> users{{{1.0, 2.0}, {0.0}}, {{0.0}, {1.0}}};
    CHECK(aggregate_eer(users, false) == doctest::Approx(0.5));
    CHECK(aggregate_eer(users, true) == compute_eer({{1.0, 2.0, 0.0}, {0.0, 1.0}}).eer);
}

TEST_CASE("usability fit on an exactly anti-correlated table") {
    const std::vector<GestureUsability> t{{GestureType::Swipe, 1.0, 100.0, 0.30},
                                          {GestureType::Circle, 3.0, 140.0, 0.20},
                                          {GestureType::Sig, 7.0, 220.0, 0.00}};
    const UsabilityFit f = usability_security_fit(t);
    CHECK(f.corners.r == doctest::Approx(-1.0));
    CHECK(f.frames.r == doctest::Approx(-1.0));
    CHECK(f.corners.slope == doctest::Approx(-0.05));
    CHECK_THROWS_AS(usability_security_fit(std::vector<GestureUsability>(t.begin(), t.begin() + 2)), UsageError);
    CHECK(fit_csv(f).rfind("fit,r,slope,intercept\n", 0) == 0);
}

TEST_CASE("usage statistics count frames and corners") {
    const auto corpus = generate_corpus(test::small_config(2, 2, {GestureType::Swipe, GestureType::Abc}), 4);
    const auto stats = usage_stats(corpus);
    REQUIRE(stats.size() == 2);
    CHECK(stats[0].gesture == GestureType::Swipe);
    CHECK(stats[0].samples == 4);
    CHECK(stats[0].mean_corners < stats[1].mean_corners);
    CHECK(stats[0].mean_frames < stats[1].mean_frames);
}

TEST_CASE("consistency without drift stays flat") {
    SynthConfig c = test::small_config(4, 6, {GestureType::Circle});
    c.n_batches = 4;
    const ConsistencyReport r = consistency_experiment(generate_corpus(c, 9), {});
    REQUIRE(r.gestures.size() == 1);
    const auto& b = r.gestures[0].batches;
    REQUIRE(b.size() == 4);
    CHECK(b[0].samples == 4 * 2);
    CHECK(b[1].samples == 4 * 6);
    for (const auto& x : b) CHECK(std::abs(x.eer - b[0].eer) <= 0.03);
    CHECK(mean_eer_over(r.gestures[0], 2, 4) == doctest::Approx((b[1].eer + b[2].eer + b[3].eer) / 3));
    CHECK(consistency_csv(r).rfind("gesture,batch,eer,mean_frames,mean_corners,samples\n", 0) == 0);
}

TEST_CASE("consistency reports skipped batches and rejects batch numbers past the limit") {
    SynthConfig c = test::small_config(3, 5, {GestureType::Zoom});
    c.n_batches = 3;
    auto corpus = generate_corpus(c, 9);
    std::erase_if(corpus, [](const RawSample& s) { return s.batch == 2; });
    const ConsistencyReport r = consistency_experiment(corpus, {});
    CHECK(r.gestures[0].batches.size() == 2);
    CHECK(r.notices.size() == 1);
    corpus[0].batch = kMaxBatches + 1;
    CHECK_THROWS_AS(consistency_experiment(corpus, {}), DataError);
}

TEST_CASE("attack simulation orders the two observation modes") {
    const SynthConfig c = test::small_config(5, 6, {GestureType::Circle});
    const auto corpus = generate_corpus(c, 31);
    const AttackResult r = attack_simulation(corpus, c, 31, GestureType::Circle, {});
    CHECK(r.genuine_trials == 5 * 2);
    CHECK(r.attack_trials == 5 * 4 * 2);
    CHECK(r.multi_above_one >= 0.9);
    CHECK(r.one_observation_acceptance <= r.multi_observation_acceptance);
    for (const PrPoint& p : r.multi_observation) {
        CHECK(precision_at_recall(r.one_observation, p.recall) >= p.precision);
    }
    const std::string csv = attack_csv(std::vector<AttackResult>{r});
    CHECK(csv.find("circle,genuine_acceptance,") != std::string::npos);
    SynthConfig other = c;
    other.n_users = 3;
    CHECK_THROWS_AS(attack_simulation(corpus, other, 31, GestureType::Circle, {}), DataError);
}
