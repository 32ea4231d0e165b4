#include <doctest.h>

#include <queue>

#include "support.hpp"
#include "tacit/metrics.hpp"

using namespace tacit;

namespace {

// Mean shortest-path distance over all unordered pairs of an undirected tree.
double brute_force_virality(const std::vector<std::int32_t>& parent) {
    const auto n = parent.size();
    if (n < 2) return 0.0;
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 1; i < n; ++i) {
        adj[i].push_back(static_cast<std::size_t>(parent[i]));
        adj[static_cast<std::size_t>(parent[i])].push_back(i);
    }
    long long total = 0;
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<int> d(n, -1);
        std::queue<std::size_t> q;
        q.push(s);
        d[s] = 0;
        while (!q.empty()) {
            const auto v = q.front();
            q.pop();
            for (auto w : adj[v])
                if (d[w] < 0) {
                    d[w] = d[v] + 1;
                    q.push(w);
                }
        }
        for (std::size_t t = s + 1; t < n; ++t) total += d[t];
    }
    return static_cast<double>(total) / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

}  // namespace

TEST_CASE("impactedness-weighted change in belief") {
    const Eigen::Vector2d before(0.5, 0.5), after(0.4, 0.55), impact(0.8, 0.2);
    CHECK(iwcib(before, after, impact) == doctest::Approx(-0.07).epsilon(1e-12));
    CHECK(iwcib(before, before, impact) == 0.0);
    const Eigen::Matrix<double, 1, 1> b0(0.3), b1(0.45), i1(0.2);
    CHECK(iwcib(b0, b1, i1) == doctest::Approx(0.15).epsilon(1e-15));
    CHECK_THROWS_AS(iwcib(before, after, Eigen::Vector2d::Zero()), Error);

    Eigen::MatrixXd B0(2, 2), B1(2, 2), I(2, 2);
    B0 << 0.5, 0.5, 0.2, 0.9;
    B1 << 0.4, 0.55, 0.2, 0.9;
    I << 0.8, 0.2, 0.5, 0.5;
    const auto v = iwcib(B0, B1, I);
    CHECK(v[0] == doctest::Approx(-0.07));
    CHECK(v[1] == 0.0);
    I(1, 0) = I(1, 1) = 0.0;
    CHECK_THROWS_AS(iwcib(B0, B1, I), Error);
}

TEST_CASE("average treatment effect") {
    const Eigen::Vector3d control(0.0, 0.1, 0.2);
    const std::vector<NodeId> both{0, 1};
    CHECK(ate(control, control, both) == 0.0);
    const Eigen::Vector3d treated(-0.02, 0.06, 0.2);
    CHECK(ate(treated, control, both) == doctest::Approx(-0.03));
    const std::vector<NodeId> missing{0, 5};
    CHECK_THROWS_AS(ate(treated, control, missing), Error);
    CHECK(disparity_ratio(-0.024, -0.018) == doctest::Approx(1.33).epsilon(0.003));

    const std::vector<double> reps{1.0, 2.0, 3.0};
    const auto e = summarize(reps);
    CHECK(e.mean == 2.0);
    CHECK(e.se == doctest::Approx(1.0 / std::sqrt(3.0)));
}

TEST_CASE("cascade statistics") {
    SimLog log;
    log.claims = {{0, 1, 2.0}, {0, -1, 1.1}};
    SUBCASE("a lone tweet") {
        test::add_utterance(log, 0, 0, 0);
        const auto s = cascade_stats(log);
        REQUIRE(s.size() == 1);
        CHECK(s[0].depth == 0);
        CHECK(s[0].max_breadth == 1);
        CHECK(s[0].size == 1);
        CHECK(s[0].structural_virality == 0.0);
    }
    SUBCASE("two retweets of a root") {
        const auto r = test::add_utterance(log, 0, 0, 0);
        test::add_utterance(log, 0, 1, 1, r);
        test::add_utterance(log, 0, 2, 1, r);
        log.reads = {{1, r, 0}, {2, r, 0}, {3, 1, 1}, {3, 2, 1}};
        const auto s = cascade_stats(log);
        REQUIRE(s.size() == 1);
        CHECK(s[0].depth == 1);
        CHECK(s[0].max_breadth == 2);
        CHECK(s[0].size == 3);
        CHECK(s[0].unique_readers == 3);
        CHECK(s[0].veracity == 1);
    }
    SUBCASE("a path of three") {
        const auto r = test::add_utterance(log, 1, 0, 0);
        const auto a = test::add_utterance(log, 1, 1, 1, r);
        test::add_utterance(log, 1, 2, 2, a);
        const auto s = cascade_stats(log);
        CHECK(s[0].structural_virality == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
        CHECK(s[0].depth == 2);
        CHECK(s[0].veracity == -1);
    }
    SUBCASE("interleaved cascades are separated") {
        const auto r1 = test::add_utterance(log, 0, 0, 0);
        const auto r2 = test::add_utterance(log, 1, 1, 0);
        test::add_utterance(log, 0, 2, 1, r1);
        test::add_utterance(log, 1, 3, 1, r2);
        test::add_utterance(log, 1, 4, 2, 3);
        const auto s = cascade_stats(log);
        REQUIRE(s.size() == 2);
        CHECK(s[0].size == 2);
        CHECK(s[1].size == 3);
        CHECK(s[1].depth == 2);
        CHECK(utterances_per_claim(log) == std::vector<std::int64_t>{2, 3});
        CHECK(cascades_per_claim(log) == std::vector<std::int64_t>{1, 1});
    }
}

TEST_CASE("structural virality equals brute-force pairwise distance on small trees") {
    Rng rng(2024);
    for (int trial = 0; trial < 500; ++trial) {
        const auto n = 1 + static_cast<std::size_t>(uniform01(rng) * 10.0);
        std::vector<std::int32_t> parent(n, -1);
        for (std::size_t i = 1; i < n; ++i) parent[i] = static_cast<std::int32_t>(uniform01(rng) * static_cast<double>(i));
        CHECK(structural_virality(parent) == brute_force_virality(parent));
    }
    const std::vector<std::int32_t> bad{-1, 2, 0};
    CHECK_THROWS_AS(structural_virality(bad), Error);
}

TEST_CASE("complementary CDF") {
    const std::vector<double> v{1, 2, 3};
    const auto c = ccdf(v);
    REQUIRE(c.size() == 3);
    CHECK(c[0] == std::pair{1.0, 1.0});
    CHECK(c[1].second == doctest::Approx(2.0 / 3.0));
    const std::vector<double> constant{4, 4, 4};
    CHECK(ccdf(constant) == std::vector<std::pair<double, double>>{{4.0, 1.0}});
    CHECK_THROWS_AS(ccdf(std::vector<double>{}), Error);

    Rng rng(5);
    std::vector<double> r(300);
    for (auto& x : r) x = std::floor(uniform01(rng) * 20);
    const auto rc = ccdf(r);
    for (std::size_t i = 1; i < rc.size(); ++i) {
        CHECK(rc[i].first > rc[i - 1].first);
        CHECK(rc[i].second <= rc[i - 1].second);
    }
}

TEST_CASE("misinformation read series") {
    const auto g = test::make_graph({0, 0, 0, 0, 1}, {});
    SimLog log;
    log.claims = {{0, 1, 2.0}, {1, 0, 1.0}};
    SUBCASE("no misinformation") {
        const auto s = misinfo_read_series(log, *g, 2, 6);
        for (const auto& c : s)
            for (const auto& t : c)
                for (double x : t) CHECK(x == 0.0);
    }
    SUBCASE("one read steps the cumulative series") {
        test::add_utterance(log, 0, 4, 2);
        test::add_utterance(log, 1, 4, 2);
        log.reads = {{1, 0, 3}, {2, 1, 3}};
        const auto s = misinfo_read_series(log, *g, 2, 6);
        CHECK(s[0][0][2] == 0.0);
        CHECK(s[0][0][3] == 0.25);
        CHECK(s[0][0][5] == 0.25);
        CHECK(s[0][1][5] == 0.0);
        CHECK(s[1][0][5] == 0.0);
    }
}
