#include <doctest.h>

#include "support.hpp"
#include "tacit/config_json.hpp"

using namespace tacit;

namespace {

std::shared_ptr<const Graph> three_communities() {
    const std::vector<int> sizes{60, 30, 10};
    return std::make_shared<const Graph>(generate_synthetic_graph(sizes, 0.1, 0.01, 4));
}

}  // namespace

TEST_CASE("claim virality") {
    ViralityParams p;
    SUBCASE("ranges by veracity") {
        Rng rng(1);
        for (int i = 0; i < 1000; ++i) {
            const double lo = claim_virality(-1, p, rng);
            CHECK(lo >= p.z1);
            CHECK(lo <= p.z1 + 1.0);
            const double hi = claim_virality(1, p, rng);
            CHECK(hi >= p.z2);
            CHECK(hi <= p.z2 + 1.0);
        }
    }
    SUBCASE("anti-misinformation and noise share one branch") {
        Rng a(42), b(42);
        CHECK(claim_virality(-1, p, a) == claim_virality(0, p, b));
    }
    SUBCASE("a degenerate Beta pins the offset") {
        p.alpha2 = 1e-300;  // Beta draw ~ 0
        Rng rng(3);
        CHECK(claim_virality(1, p, rng) == doctest::Approx(p.z2));
    }
}

TEST_CASE("world initialisation") {
    const auto g = three_communities();

    SUBCASE("canonical scenario sizes") {
        auto cfg = ScenarioConfig::canonical();
        const auto w = init_world(g, cfg, 1);
        CHECK(w.claims.size() == 600);
        CHECK(w.belief.rows() == 100);
        CHECK(w.belief.cols() == 2);
        CHECK(w.log.claims.size() == 600);
        for (TopicId t = 0; t < 2; ++t)
            for (int v = -1; v <= 1; ++v) {
                const auto first = claim_block_start(t, v, 100);
                for (ClaimId c = first; c < first + 100; ++c) {
                    CHECK(w.claims[c].topic == t);
                    CHECK(w.claims[c].veracity == v);
                }
            }
    }
    SUBCASE("zero spread gives community means exactly") {
        auto cfg = ScenarioConfig::canonical();
        cfg.node_draw_stddev = 0.0;
        const auto w = init_world(g, cfg, 2);
        for (NodeId j = 0; j < 100; ++j) {
            CHECK(w.belief(j, 0) == cfg.community_belief(g->community(j), 0));
            CHECK(w.impactedness(j, 1) == cfg.community_impactedness(g->community(j), 1));
        }
    }
    SUBCASE("bot count") {
        auto cfg = ScenarioConfig::canonical();
        cfg.bot_fraction = 0.0;
        auto w = init_world(g, cfg, 3);
        CHECK(std::count(w.kind.begin(), w.kind.end(), NodeKind::Bot) == 0);
        cfg.bot_fraction = 0.05;
        w = init_world(g, cfg, 3);
        CHECK(std::count(w.kind.begin(), w.kind.end(), NodeKind::Bot) == 5);
    }
    SUBCASE("beliefs stay in the unit interval") {
        auto cfg = ScenarioConfig::canonical();
        cfg.node_draw_stddev = 2.0;
        const auto w = init_world(g, cfg, 4);
        CHECK(w.belief.minCoeff() >= 0.0);
        CHECK(w.belief.maxCoeff() <= 1.0);
    }
    SUBCASE("deterministic per seed") {
        const auto cfg = ScenarioConfig::canonical();
        const auto a = init_world(g, cfg, 9);
        const auto b = init_world(g, cfg, 9);
        CHECK(a.belief == b.belief);
        CHECK(a.kind == b.kind);
        CHECK(a.stream_seed == b.stream_seed);
        for (std::size_t c = 0; c < a.claims.size(); ++c) CHECK(a.claims[c].virality == b.claims[c].virality);
    }
    SUBCASE("mismatched community count") {
        auto cfg = ScenarioConfig::canonical();
        cfg.community_belief.conservativeResize(2, 2);
        cfg.community_impactedness.conservativeResize(2, 2);
        CHECK_THROWS_AS(init_world(g, cfg, 1), Error);
    }
}

TEST_CASE("scenario validation and JSON") {
    auto cfg = ScenarioConfig::canonical();
    CHECK_NOTHROW(cfg.validate());

    auto bad = cfg;
    bad.inbox_read_cap = 0;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = cfg;
    bad.community_belief(0, 0) = 1.5;
    CHECK_THROWS_AS(bad.validate(), Error);

    const auto round_trip = scenario_from_json(scenario_to_json(cfg));
    CHECK(round_trip.community_belief == cfg.community_belief);
    CHECK(round_trip.virality.beta2 == cfg.virality.beta2);
    CHECK(round_trip.noise_tweet_share == cfg.noise_tweet_share);

    CHECK_THROWS_WITH_AS(scenario_from_json(nlohmann::json{{"bogus", 1}}), doctest::Contains("bogus"), Error);
}
