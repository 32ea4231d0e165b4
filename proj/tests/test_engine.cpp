#include <doctest.h>

#include <map>
#include <set>

#include "support.hpp"

using namespace tacit;

namespace {

WorldState small_world(std::uint64_t seed = 1) {
    const std::vector<int> sizes{40, 20};
    auto g = std::make_shared<const Graph>(generate_synthetic_graph(sizes, 0.15, 0.02, seed));
    auto cfg = test::flat_scenario(2, 2, 5);
    cfg.bot_fraction = 0.05;
    return init_world(g, cfg, seed);
}

}  // namespace

TEST_CASE("claim choice probabilities") {
    Eigen::Vector2d f(1.0, 1.1);
    const auto p1 = claim_choice_probabilities(f, 9.0, 1.0);
    CHECK(p1[0] == doctest::Approx(0.289).epsilon(0.002));
    CHECK(p1[1] == doctest::Approx(0.711).epsilon(0.002));
    const auto p2 = claim_choice_probabilities(f, 9.0, 2.0);
    CHECK(p2[0] == doctest::Approx(0.131).epsilon(0.004));
    CHECK(p2[1] == doctest::Approx(0.869).epsilon(0.002));
    const auto even = claim_choice_probabilities(Eigen::Vector2d(1.3, 1.3), 9.0, 2.0);
    CHECK(even[0] == 0.5);
    CHECK(even.sum() == doctest::Approx(1.0));
}

TEST_CASE("softmax is shift invariant and stable") {
    const Eigen::Vector3d x(1000.0, 1001.0, 999.0);
    const auto p = softmax(x);
    CHECK(p.allFinite());
    CHECK((p - softmax(Eigen::Vector3d(1.0, 2.0, 0.0))).cwiseAbs().maxCoeff() < 1e-15);
    const Eigen::Vector3f xf(0.f, 0.f, 0.f);
    CHECK(softmax(xf)[0] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("belief update") {
    CHECK(update_belief(0.5, 0.1, 0, 1, 0.5) == doctest::Approx(0.65));
    CHECK(update_belief(0.5, 0.1, 9, -1, 0.0) == doctest::Approx(0.49));
    CHECK(update_belief(0.37, 0.1, 3, 0, 0.9) == 0.37);
    CHECK(update_belief(0.99, 0.5, 0, 1, 1.0) == 1.0);
    CHECK(update_belief(0.01, 0.5, 0, -1, 1.0) == 0.0);

    auto w = small_world();
    const double b = w.belief(3, 1);
    update_belief(3, 1, 0, w);
    CHECK(w.belief(3, 1) == b);
    CHECK(w.num_read(3, 1) == 1);  // noise still counts as a read
}

TEST_CASE("retweet probability") {
    auto g = test::make_graph({0, 0, 0}, {{1, 0}, {2, 0}});
    auto cfg = test::flat_scenario(1, 1, 1);
    cfg.retweet_scale = 1.0;
    auto w = init_world(g, cfg, 1);
    const auto set_claim = [&](ClaimId c, double virality) {
        w.claims[c].virality = virality;
        w.log.claims[c].virality = virality;
    };
    const auto anti = claim_block_start(0, -1, 1), noise = claim_block_start(0, 0, 1), mis = claim_block_start(0, 1, 1);
    set_claim(noise, 1.0);
    const auto u = test::add_utterance(w.log, noise, 0, 0);
    CHECK(retweet_probability(1, w.log.utterances[u], w) == doctest::Approx(0.5));

    const auto m = test::add_utterance(w.log, mis, 0, 0);
    w.belief(1, 0) = 0.0;
    CHECK(retweet_probability(1, w.log.utterances[m], w) == 0.0);
    const auto a = test::add_utterance(w.log, anti, 0, 0);
    w.belief(1, 0) = 1.0;
    CHECK(retweet_probability(1, w.log.utterances[a], w) == 0.0);

    set_claim(mis, 3.0);
    CHECK(retweet_probability(1, w.log.utterances[m], w) == 1.0);  // capped
}

TEST_CASE("node turns") {
    SUBCASE("an idle node emits nothing") {
        auto g = test::make_graph({0, 0}, {});
        auto cfg = test::flat_scenario(1, 1, 2);
        cfg.wake_prob = 1.0;
        auto w = init_world(g, cfg, 1);
        step(w);
        CHECK(w.log.utterances.empty());
        CHECK(w.log.reads.empty());
        CHECK(w.clock == 1);
    }
    SUBCASE("an awake bot tweets exactly once, always misinformation") {
        auto g = test::make_graph({0, 0}, {});
        auto cfg = test::flat_scenario(1, 1, 2);
        cfg.wake_prob = 1.0;
        auto w = init_world(g, cfg, 1);
        w.kind[0] = NodeKind::Bot;
        for (int t = 0; t < 20; ++t) step(w);
        CHECK(w.log.utterances.size() == 20);
        for (const auto& u : w.log.utterances) {
            CHECK(u.author == 0);
            CHECK(w.log.claims[u.claim].veracity == 1);
        }
    }
    SUBCASE("reads are capped and the inbox is cleared") {
        auto g = test::make_graph({0, 0}, {});
        auto cfg = test::flat_scenario(1, 1, 2);
        cfg.wake_prob = 1.0;
        cfg.inbox_read_cap = 20;
        auto w = init_world(g, cfg, 1);
        for (int i = 0; i < 50; ++i) w.inbox[0].push_back(test::add_utterance(w.log, claim_block_start(0, 0, 2), 1, 0));
        step(w);
        std::size_t reads = 0;
        for (const auto& r : w.log.reads) reads += r.node == 0;
        CHECK(reads == 20);
        CHECK(w.inbox[0].empty());
        std::set<UtteranceId> distinct;
        for (const auto& r : w.log.reads) distinct.insert(r.utterance);
        CHECK(distinct.size() == 20);
    }
    SUBCASE("blocked claims are neither tweeted nor read") {
        auto w = small_world(5);
        w.config.wake_prob = 1.0;
        for (auto& c : w.claims)
            if (c.veracity == 1) c.blocked = true;
        run(w, 10);
        for (const auto& u : w.log.utterances) CHECK(w.log.claims[u.claim].veracity != 1);
    }
}

TEST_CASE("empirical claim choice matches the softmax") {
    // One bot, one topic, three misinformation claims: every draw is a choice
    // within the same block.
    auto g = test::make_graph({0}, {});
    auto cfg = test::flat_scenario(1, 1, 3);
    auto w = init_world(g, cfg, 1);
    w.kind[0] = NodeKind::Bot;
    const auto first = claim_block_start(0, 1, 3);
    const Eigen::Vector3d f(1.6, 1.75, 1.9);
    for (int i = 0; i < 3; ++i) w.claims[first + i].virality = f[i];
    const auto p = claim_choice_probabilities(f, cfg.virality.r2, cfg.virality.q2);

    Rng rng(77);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) select_tweet(0, w, rng);
    Eigen::Vector3d freq = Eigen::Vector3d::Zero();
    for (const auto& u : w.log.utterances) freq[u.claim - first] += 1.0 / draws;
    CHECK((freq - p).cwiseAbs().maxCoeff() < 0.01);
}

TEST_CASE("run and snapshots") {
    SUBCASE("run to the current clock is a no-op") {
        auto w = small_world();
        run(w, 0);
        CHECK(w.log.utterances.empty());
        CHECK_THROWS_AS(run(w = small_world(), -1), Error);
    }
    SUBCASE("snapshot round trip is byte-identical") {
        auto w = small_world();
        run(w, 8);
        record_belief_checkpoint(w);
        const auto s = snapshot(w);
        const auto back = restore(s, w.graph);
        CHECK(snapshot(back) == s);
    }
    SUBCASE("restored runs repeat exactly") {
        auto w = small_world(2);
        run(w, 5);
        const auto s = snapshot(w);
        auto a = restore(s, w.graph);
        auto b = restore(s, w.graph);
        run(a, 15);
        run(b, 15);
        CHECK(snapshot(a) == snapshot(b));
        CHECK(a.log.event_hash(15) == b.log.event_hash(15));
    }
    SUBCASE("a diverging post-period leaves the pre-period intact") {
        auto w = small_world(3);
        run(w, 6);
        const auto s = snapshot(w);
        auto m0 = restore(s, w.graph);
        auto m1 = restore(s, w.graph);
        run(m0, 14);
        run(m1, 14, [](WorldState& x) {
            for (auto& c : x.claims)
                if (c.veracity == 1) c.blocked = true;
        });
        CHECK(m0.log.event_hash(6) == m1.log.event_hash(6));
        CHECK(m0.log.event_hash(14) != m1.log.event_hash(14));
    }
    SUBCASE("format errors") {
        auto w = small_world();
        auto s = snapshot(w);
        auto truncated = s;
        truncated.bytes.resize(truncated.bytes.size() / 2);
        CHECK_THROWS_AS(restore(truncated, w.graph), Error);
        auto wrong_version = s;
        wrong_version.bytes[8] = static_cast<char>(kSnapshotVersion + 1);
        CHECK_THROWS_WITH_AS(restore(wrong_version, w.graph), doctest::Contains("version"), Error);
        test::TempDir dir("snapshot");
        save_snapshot(s, dir.path / "w.snap");
        CHECK(load_snapshot(dir.path / "w.snap") == s);
    }
}
