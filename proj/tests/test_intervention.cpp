#include <doctest.h>

#include <fstream>
#include <map>

#include "support.hpp"
#include "tacit/intervention.hpp"

using namespace tacit;

namespace {

struct Fixture {
    std::shared_ptr<const Graph> graph;
    WorldState world;
    CentralityMap centrality;
    FeatureOptions features;
    CheckworthinessModel model;
    Snapshot snap;

    Fixture() : world(make_world()) {
        run(world, 10);
        record_belief_checkpoint(world);
        snap = snapshot(world);
        centrality = approx_betweenness(*graph, graph->num_nodes(), 1);
        const auto table = tabulate_features(world.log, *graph, centrality, world.clock, features);
        TrainingOptions opts;
        opts.n = 30;
        opts.m = 9;
        opts.boosting.n_trees = 20;
        model = train_model(build_training_set(world, table, ClaimSampling::Virality, LabelStrategy::Random, opts, 2), opts.boosting);
    }

    WorldState make_world() {
        const std::vector<int> sizes{80, 40, 20};
        graph = std::make_shared<const Graph>(generate_synthetic_graph(sizes, 0.08, 0.01, 12));
        auto cfg = ScenarioConfig::canonical();
        cfg.claims_per_topic_per_veracity = 12;
        return init_world(graph, cfg, 12);
    }

    MitigationRun go(Workflow wf, int z, TimeStep t_end = 25) const {
        MitigationConfig m;
        m.workflow = wf;
        m.z = z;
        return run_mitigation(snap, graph, m, m.is_baseline() ? nullptr : &model, centrality, features, t_end);
    }
};

}  // namespace

TEST_CASE("selection") {
    // Claims A=0, B=1 on topic 0 and C=2 on topic 1.
    const std::vector<std::pair<ClaimId, double>> scores{{2, 0.7}, {0, 0.9}, {1, 0.8}};
    const std::vector<TopicId> topic{0, 0, 1};
    FactCheckLedger ledger;
    CHECK(select_for_checking(scores, Workflow::TopPredicted, 2, topic, 2, ledger) == std::vector<ClaimId>{0, 1});
    CHECK(select_for_checking(scores, Workflow::TopPredictedByTopic, 2, topic, 2, ledger) == std::vector<ClaimId>{0, 2});
    CHECK(select_for_checking(scores, Workflow::TopPredicted, 10, topic, 2, ledger).size() == 3);
    CHECK(select_for_checking(scores, Workflow::None, 2, topic, 2, ledger).empty());
    CHECK_THROWS_AS(select_for_checking(scores, Workflow::TopPredictedByTopic, 1, topic, 2, ledger), Error);

    ledger.add({1, 0, 0.9, 1, true});
    CHECK(select_for_checking(scores, Workflow::TopPredicted, 2, topic, 2, ledger) == std::vector<ClaimId>{1, 2});
    CHECK_THROWS_AS(ledger.add({2, 0, 0.9, 1, true}), Error);

    const std::vector<std::pair<ClaimId, double>> tied{{1, 0.5}, {0, 0.5}};
    CHECK(select_for_checking(tied, Workflow::TopPredicted, 1, topic, 2, FactCheckLedger{}) == std::vector<ClaimId>{0});
}

TEST_CASE("mitigation grid") {
    const auto grid = full_grid(2);
    CHECK(grid.size() == 13);
    CHECK(grid.back().is_baseline());
    CHECK(grid.back().name() == "M0");
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) CHECK_FALSE(grid[i].is_baseline());
    MitigationConfig zero = grid[0];
    zero.z = 0;
    CHECK(zero.is_baseline());
}

TEST_CASE("mitigation runs") {
    const Fixture fx;

    SUBCASE("blocked claims vanish from the moment they are checked") {
        const auto r = fx.go(Workflow::TopPredicted, 3);
        REQUIRE(r.ledger.size() > 0);
        CHECK(r.ledger.size() <= 3u * 15u);
        const auto& log = r.world.log;
        for (const auto& rec : r.ledger.records()) {
            CHECK(rec.t >= 10);  // first hook fires before step T_m
            const auto& claim = r.world.claims[rec.claim];
            CHECK(claim.fact_checked_at == rec.t);
            CHECK(claim.blocked == (claim.veracity == 1));
            CHECK(rec.blocked == claim.blocked);
            if (!claim.blocked) continue;
            for (const auto& u : log.utterances)
                if (u.claim == rec.claim) CHECK(u.created_at < rec.t);
            for (const auto& e : log.reads)
                if (log.utterances[e.utterance].claim == rec.claim) CHECK(e.t < rec.t);
        }
        CHECK(log.fact_checks.size() == r.ledger.size());
        CHECK(removal_violations(r.world) == 0);
    }
    SUBCASE("per-topic workflow") {
        const auto r = fx.go(Workflow::TopPredictedByTopic, 2);
        std::map<TimeStep, std::vector<TopicId>> by_step;
        for (const auto& rec : r.ledger.records()) by_step[rec.t].push_back(r.world.claims[rec.claim].topic);
        for (const auto& [t, topics] : by_step) {
            CHECK(topics.size() <= 2);
            if (topics.size() == 2) CHECK(topics[0] != topics[1]);
        }
    }
    SUBCASE("baselines leave the world untouched") {
        const auto base = fx.go(Workflow::None, 2);
        const auto zero = fx.go(Workflow::TopPredicted, 0);
        CHECK(base.ledger.size() == 0);
        CHECK(base.world.log.event_hash(25) == zero.world.log.event_hash(25));
        const auto treated = fx.go(Workflow::TopPredicted, 3);
        CHECK(base.world.log.event_hash(10) == treated.world.log.event_hash(10));
    }
    SUBCASE("the model must match the configured strategies") {
        MitigationConfig m;
        m.workflow = Workflow::TopPredicted;
        m.label_strategy = LabelStrategy::KnowledgeableCommunity;
        CHECK_THROWS_AS(run_mitigation(fx.snap, fx.graph, m, &fx.model, fx.centrality, fx.features, 20), Error);
        m.label_strategy = LabelStrategy::Random;
        CHECK_THROWS_AS(run_mitigation(fx.snap, fx.graph, m, nullptr, fx.centrality, fx.features, 20), Error);
    }
    SUBCASE("fact-check export") {
        const auto r = fx.go(Workflow::TopPredicted, 2, 14);
        test::TempDir dir("factchecks");
        write_factchecks_csv(r.ledger.records(), dir.path / "f.csv");
        std::ifstream in(dir.path / "f.csv");
        std::string header;
        std::getline(in, header);
        CHECK(header == "t,claim_id,score,veracity,blocked");
    }
}

TEST_CASE("the removal scan sees late events") {
    const auto g = test::make_graph({0, 0}, {});
    auto w = init_world(g, test::flat_scenario(1, 1, 2), 1);
    const auto mis = claim_block_start(0, 1, 2);
    const auto u = test::add_utterance(w.log, mis, 0, 3);
    w.log.reads.push_back({1, u, 5});
    w.claims[mis].blocked = true;
    w.claims[mis].fact_checked_at = 5;
    CHECK(removal_violations(w) == 1);
    w.claims[mis].fact_checked_at = 3;
    CHECK(removal_violations(w) == 2);
    w.claims[mis].fact_checked_at = 6;
    CHECK(removal_violations(w) == 0);
}

TEST_CASE("active claims") {
    const auto g = test::make_graph({0, 0}, {});
    auto w = init_world(g, test::flat_scenario(1, 1, 2), 1);
    test::add_utterance(w.log, 0, 0, 3);
    test::add_utterance(w.log, 1, 0, 3);
    test::add_utterance(w.log, 2, 0, 4);
    w.claims[1].blocked = true;
    FactCheckLedger ledger;
    CHECK(active_claims(w, 3, ledger) == std::vector<ClaimId>{0});
    ledger.add({4, 0, 1.0, -1, false});
    CHECK(active_claims(w, 3, ledger).empty());
    CHECK(active_claims(w, 4, ledger) == std::vector<ClaimId>{2});
}
