#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "support.hpp"

using namespace tacit;
using test::TempDir;

namespace {

// Directed betweenness from all-pairs BFS path counts.
Eigen::VectorXd brute_force_betweenness(const Graph& g) {
    const auto n = static_cast<int>(g.num_nodes());
    std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
    std::vector<std::vector<double>> paths(n, std::vector<double>(n, 0.0));
    for (int s = 0; s < n; ++s) {
        std::vector<int> queue{s};
        dist[s][s] = 0;
        paths[s][s] = 1.0;
        for (std::size_t h = 0; h < queue.size(); ++h) {
            const int v = queue[h];
            for (auto w : g.following(v)) {
                if (dist[s][w] < 0) {
                    dist[s][w] = dist[s][v] + 1;
                    queue.push_back(w);
                }
                if (dist[s][w] == dist[s][v] + 1) paths[s][w] += paths[s][v];
            }
        }
    }
    Eigen::VectorXd bc = Eigen::VectorXd::Zero(n);
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
            if (s == t || dist[s][t] < 0) continue;
            for (int v = 0; v < n; ++v) {
                if (v == s || v == t || dist[s][v] < 0 || dist[v][t] < 0) continue;
                if (dist[s][v] + dist[v][t] == dist[s][t]) bc[v] += paths[s][v] * paths[v][t] / paths[s][t];
            }
        }
    return bc;
}

}  // namespace

TEST_CASE("loading a minimal edge list") {
    TempDir dir("graph_minimal");
    const auto g = load_graph(dir.write("e.csv", "0,1\n"), dir.write("c.csv", "0,0\n1,0\n"));
    CHECK(g.num_nodes() == 2);
    CHECK(g.num_edges() == 1);
    CHECK(g.in_degree(1) == 1);
    CHECK(g.followers(1)[0] == 0);
    CHECK(g.following(0)[0] == 1);
}

TEST_CASE("duplicates and self-loops are dropped") {
    TempDir dir("graph_dedup");
    const auto g = load_graph(dir.write("e.csv", "follower,followed\n0,1\n0,1\n2,2\n"), dir.write("c.csv", "node,community\n0,0\n1,0\n2,0\n"));
    CHECK(g.num_nodes() == 3);
    CHECK(g.num_edges() == 1);
}

TEST_CASE("ids are remapped densely in ascending order") {
    TempDir dir("graph_remap");
    const auto g = load_graph(dir.write("e.csv", "40,10\n10,30\n"), dir.write("c.csv", "10,7\n30,7\n40,3\n"));
    REQUIRE(g.num_nodes() == 3);
    CHECK(g.original_ids() == std::vector<std::int64_t>{10, 30, 40});
    CHECK(g.community(0) == 1);  // community 7 -> 1
    CHECK(g.community(2) == 0);  // community 3 -> 0
    CHECK(g.has_edge(2, 0));
    CHECK(g.has_edge(0, 1));
    CHECK_FALSE(g.has_edge(1, 0));
}

TEST_CASE("input errors name the offending node or line") {
    TempDir dir("graph_errors");
    CHECK_THROWS_WITH_AS(load_graph(dir.write("e.csv", "0,1\n"), dir.write("c.csv", "0,0\n")), "node 1 missing community", Error);
    CHECK_THROWS_WITH_AS(load_graph(dir.write("e2.csv", "0,1\n0,x\n"), dir.write("c2.csv", "0,0\n1,0\n")),
                         doctest::Contains("line 2"), Error);
}

TEST_CASE("synthetic block model") {
    SUBCASE("a single complete block") {
        const std::vector<int> sizes{10};
        const auto g = generate_synthetic_graph(sizes, 1.0, 0.0, 1);
        CHECK(g.num_edges() == 90);
    }
    SUBCASE("no edges at zero probability") {
        const std::vector<int> sizes{5, 5};
        CHECK(generate_synthetic_graph(sizes, 0.0, 0.0, 1).num_edges() == 0);
    }
    SUBCASE("intra-block density exceeds inter-block density") {
        const std::vector<int> sizes{100, 30};
        const auto g = generate_synthetic_graph(sizes, 0.1, 0.01, 7);
        double within = 0, across = 0;
        for (NodeId a = 0; a < 130; ++a)
            for (auto b : g.following(a)) (g.community(a) == g.community(b) ? within : across) += 1;
        const double within_pairs = 100.0 * 99 + 30.0 * 29, across_pairs = 2.0 * 100 * 30;
        CHECK(within / within_pairs > across / across_pairs);
    }
    SUBCASE("inverted structure is rejected") {
        const std::vector<int> sizes{5, 5};
        CHECK_THROWS_AS(generate_synthetic_graph(sizes, 0.01, 0.1, 1), Error);
    }
    SUBCASE("deterministic per seed") {
        const std::vector<int> sizes{40, 20};
        const auto a = generate_synthetic_graph(sizes, 0.2, 0.02, 3, 0.3);
        const auto b = generate_synthetic_graph(sizes, 0.2, 0.02, 3, 0.3);
        REQUIRE(a.num_edges() == b.num_edges());
        for (NodeId j = 0; j < 60; ++j) CHECK(std::ranges::equal(a.following(j), b.following(j)));
    }
}

TEST_CASE("stratified subgraph sampling") {
    const std::vector<int> sizes{400, 120, 40};
    const auto g = generate_synthetic_graph(sizes, 0.05, 0.005, 11);

    SUBCASE("fraction 1 keeps the graph") {
        const auto s = sample_subgraph(g, 1.0, 5);
        CHECK(s.num_nodes() == g.num_nodes());
        CHECK(s.num_edges() == g.num_edges());
    }
    SUBCASE("each community within one node of its quota") {
        const auto s = sample_subgraph(g, 0.15, 5);
        for (CommunityId c = 0; c < 3; ++c)
            CHECK(std::abs(static_cast<double>(s.members(c).size()) - 0.15 * sizes[static_cast<std::size_t>(c)]) <= 1.0);
    }
    SUBCASE("induced edges and determinism") {
        const auto a = sample_subgraph(g, 0.5, 9);
        const auto b = sample_subgraph(g, 0.5, 9);
        CHECK(a.original_ids() == b.original_ids());
        const auto& ids = a.original_ids();
        CHECK(std::is_sorted(ids.begin(), ids.end()));
        for (NodeId x = 0; x < static_cast<NodeId>(a.num_nodes()); ++x)
            for (NodeId y = 0; y < static_cast<NodeId>(a.num_nodes()); ++y)
                CHECK(a.has_edge(x, y) == g.has_edge(static_cast<NodeId>(ids[x]), static_cast<NodeId>(ids[y])));
    }
    SUBCASE("an emptied community is an error") {
        // Two nodes to place: the large community's quota and one of the singletons.
        const std::vector<int> tiny{100, 1, 1};
        CHECK_THROWS_AS(sample_subgraph(generate_synthetic_graph(tiny, 0.1, 0.0, 1), 0.01, 1), Error);
    }
}

TEST_CASE("prestige is in-degree over the maximum") {
    SUBCASE("star") {
        const auto g = test::make_graph({0, 0, 0, 0, 0, 0}, {{1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}});
        const auto p = compute_prestige(*g);
        CHECK(p[0] == 1.0);
        CHECK(p[3] == 0.0);
    }
    SUBCASE("in-degrees 4 and 2") {
        const auto g = test::make_graph({0, 0, 0, 0, 0, 0}, {{2, 0}, {3, 0}, {4, 0}, {5, 0}, {2, 1}, {3, 1}});
        const auto p = compute_prestige(*g);
        CHECK(p[0] == 1.0);
        CHECK(p[1] == 0.5);
    }
    SUBCASE("no edges") {
        const auto g = test::make_graph({0, 0}, {});
        CHECK(compute_prestige(*g).isZero());
    }
}

TEST_CASE("betweenness") {
    SUBCASE("directed path") {
        const auto g = test::make_graph({0, 0, 0}, {{0, 1}, {1, 2}});
        const auto bc = approx_betweenness(*g, 3, 0);
        CHECK(bc.exact);
        CHECK(bc.betweenness[0] == 0.0);
        CHECK(bc.betweenness[1] == 1.0);
        CHECK(bc.betweenness[2] == 0.0);
    }
    SUBCASE("all pivots match brute force on random graphs") {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const std::vector<int> sizes{15, 10};
            const auto g = generate_synthetic_graph(sizes, 0.2, 0.05, seed);
            const auto bc = approx_betweenness(g, g.num_nodes(), seed);
            const auto oracle = brute_force_betweenness(g);
            CHECK((bc.betweenness - oracle).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
    SUBCASE("edgeless graph") {
        const auto g = test::make_graph({0, 0, 0, 0}, {});
        CHECK(approx_betweenness(*g, 2, 1).betweenness.isZero());
    }
}
