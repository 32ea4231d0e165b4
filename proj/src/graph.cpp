#include "tacit/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "tacit/csv.hpp"
#include "tacit/rng.hpp"

namespace tacit {

Graph::Graph(std::vector<CommunityId> community, std::span<const std::pair<NodeId, NodeId>> edges)
    : community_(std::move(community)) {
    const auto n = community_.size();
    out_edges_.resize(n);
    in_edges_.resize(n);
    CommunityId max_c = -1;
    for (auto c : community_) {
        if (c < 0) throw Error("negative community id");
        max_c = std::max(max_c, c);
    }
    members_.resize(static_cast<std::size_t>(max_c + 1));
    for (std::size_t j = 0; j < n; ++j) members_[community_[j]].push_back(static_cast<NodeId>(j));

    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n || static_cast<std::size_t>(b) >= n)
            throw Error("edge (" + std::to_string(a) + "," + std::to_string(b) + ") references an unknown node");
        if (a == b) continue;
        out_edges_[a].push_back(b);
    }
    for (std::size_t a = 0; a < n; ++a) {
        auto& out = out_edges_[a];
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        for (auto b : out) in_edges_[b].push_back(static_cast<NodeId>(a));
        num_edges_ += out.size();
    }
    original_id_.resize(n);
    std::iota(original_id_.begin(), original_id_.end(), 0);
}

bool Graph::has_edge(NodeId follower, NodeId followed) const {
    const auto& out = out_edges_[follower];
    return std::binary_search(out.begin(), out.end(), followed);
}

void Graph::set_original_ids(std::vector<std::int64_t> ids) {
    if (ids.size() != num_nodes()) throw Error("id map size mismatch");
    original_id_ = std::move(ids);
}

Graph load_graph(const std::filesystem::path& edge_list_path, const std::filesystem::path& community_path) {
    auto edge_rows = csv::read(edge_list_path, false);
    auto comm_rows = csv::read(community_path, false);
    if (!edge_rows.empty() && !csv::is_numeric_row(edge_rows.front())) edge_rows.erase(edge_rows.begin());
    if (!comm_rows.empty() && !csv::is_numeric_row(comm_rows.front())) comm_rows.erase(comm_rows.begin());

    std::map<std::int64_t, std::int64_t> raw_community;
    for (const auto& row : comm_rows) {
        if (row.fields.size() != 2) throw Error("malformed row at line " + std::to_string(row.line) + " of " + community_path.string());
        const auto node = csv::to_int(row, 0);
        const auto comm = csv::to_int(row, 1);
        if (auto [it, fresh] = raw_community.emplace(node, comm); !fresh && it->second != comm)
            throw Error("node " + std::to_string(node) + " has conflicting communities (line " + std::to_string(row.line) + ")");
    }

    std::vector<std::pair<std::int64_t, std::int64_t>> raw_edges;
    raw_edges.reserve(edge_rows.size());
    for (const auto& row : edge_rows) {
        if (row.fields.size() != 2) throw Error("malformed row at line " + std::to_string(row.line) + " of " + edge_list_path.string());
        raw_edges.emplace_back(csv::to_int(row, 0), csv::to_int(row, 1));
    }
    for (auto [a, b] : raw_edges) {
        for (auto v : {a, b})
            if (!raw_community.contains(v)) throw Error("node " + std::to_string(v) + " missing community");
    }

    // Dense remap in ascending original order, for nodes and communities alike.
    std::map<std::int64_t, CommunityId> community_index;
    for (const auto& [node, comm] : raw_community) community_index.emplace(comm, 0);
    CommunityId next = 0;
    for (auto& [comm, idx] : community_index) idx = next++;

    std::map<std::int64_t, NodeId> node_index;
    std::vector<std::int64_t> original;
    std::vector<CommunityId> community;
    for (const auto& [node, comm] : raw_community) {
        node_index.emplace(node, static_cast<NodeId>(original.size()));
        original.push_back(node);
        community.push_back(community_index.at(comm));
    }

    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(raw_edges.size());
    for (auto [a, b] : raw_edges) edges.emplace_back(node_index.at(a), node_index.at(b));

    Graph g(std::move(community), edges);
    g.set_original_ids(std::move(original));
    return g;
}

void write_id_map(const Graph& g, const std::filesystem::path& path) {
    auto out = csv::open_out(path);
    out << "dense_id,original_id,community\n";
    for (std::size_t j = 0; j < g.num_nodes(); ++j)
        out << j << ',' << g.original_ids()[j] << ',' << g.community(static_cast<NodeId>(j)) << '\n';
}

Graph generate_synthetic_graph(std::span<const int> community_sizes, double p_in, double p_out,
                               std::uint64_t seed, double popularity_tail) {
    if (community_sizes.empty()) throw Error("community_sizes must be non-empty");
    if (p_out < 0.0 || p_in > 1.0 || p_out > p_in)
        throw Error("require 0 <= p_out <= p_in <= 1 (got p_in=" + csv::fmt(p_in) + ", p_out=" + csv::fmt(p_out) + ")");
    if (popularity_tail < 0.0 || popularity_tail >= 1.0) throw Error("popularity_tail must lie in [0, 1)");

    std::vector<CommunityId> community;
    for (std::size_t c = 0; c < community_sizes.size(); ++c) {
        if (community_sizes[c] <= 0) throw Error("community sizes must be positive");
        community.insert(community.end(), static_cast<std::size_t>(community_sizes[c]), static_cast<CommunityId>(c));
    }
    const auto n = community.size();

    Rng rng = substream(seed, {0x67726170ULL});
    std::vector<double> popularity(n, 1.0);
    if (popularity_tail > 0.0) {
        for (auto& w : popularity) w = std::pow(1.0 - uniform01(rng), -popularity_tail);
        const double mean = std::accumulate(popularity.begin(), popularity.end(), 0.0) / static_cast<double>(n);
        for (auto& w : popularity) w /= mean;
    }

    std::vector<std::size_t> block_start{0};
    for (auto size : community_sizes) block_start.push_back(block_start.back() + static_cast<std::size_t>(size));

    // For each followed node b and each follower block, candidate followers are
    // visited by geometric skips, so the cost is proportional to the edge count.
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t blk = 0; blk + 1 < block_start.size(); ++blk) {
            const double p = std::min(1.0, (static_cast<std::size_t>(community[b]) == blk ? p_in : p_out) * popularity[b]);
            if (p <= 0.0) continue;
            const double log_q = std::log1p(-p);
            std::size_t a = block_start[blk];
            while (true) {
                if (p < 1.0) {
                    const double skip = std::floor(std::log(1.0 - uniform01(rng)) / log_q);
                    if (skip >= static_cast<double>(block_start[blk + 1] - a)) break;
                    a += static_cast<std::size_t>(skip);
                }
                if (a >= block_start[blk + 1]) break;
                if (a != b) edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
                ++a;
            }
        }
    }
    return Graph(std::move(community), edges);
}

Graph sample_subgraph(const Graph& g, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw Error("fraction must lie in (0, 1]");
    const auto n = g.num_nodes();
    const auto C = g.num_communities();
    const auto target = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));

    // Largest-remainder apportionment keeps each community within one node of
    // fraction * |community| while hitting the overall target exactly.
    std::vector<std::size_t> take(C);
    std::vector<std::pair<double, CommunityId>> remainder;
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < C; ++c) {
        const double quota = fraction * static_cast<double>(g.members(static_cast<CommunityId>(c)).size());
        take[c] = static_cast<std::size_t>(std::floor(quota));
        assigned += take[c];
        remainder.emplace_back(quota - std::floor(quota), static_cast<CommunityId>(c));
    }
    std::stable_sort(remainder.begin(), remainder.end(), [](auto& l, auto& r) { return l.first > r.first; });
    for (std::size_t i = 0; assigned < target && i < remainder.size(); ++i, ++assigned) ++take[remainder[i].second];

    Rng rng = substream(seed, {0x73616d70ULL});
    std::vector<NodeId> chosen;
    for (std::size_t c = 0; c < C; ++c) {
        auto pool = std::vector<NodeId>(g.members(static_cast<CommunityId>(c)).begin(), g.members(static_cast<CommunityId>(c)).end());
        if (take[c] == 0) throw Error("sampled subgraph leaves community " + std::to_string(c) + " empty");
        for (std::size_t i = 0; i < take[c]; ++i) {
            const auto k = i + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(pool.size() - i));
            std::swap(pool[i], pool[std::min(k, pool.size() - 1)]);
            chosen.push_back(pool[i]);
        }
    }
    std::sort(chosen.begin(), chosen.end());

    std::vector<NodeId> new_id(n, -1);
    std::vector<CommunityId> community;
    std::vector<std::int64_t> original;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        new_id[chosen[i]] = static_cast<NodeId>(i);
        community.push_back(g.community(chosen[i]));
        original.push_back(g.original_ids()[chosen[i]]);
    }
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (auto a : chosen)
        for (auto b : g.following(a))
            if (new_id[b] >= 0) edges.emplace_back(new_id[a], new_id[b]);

    Graph sub(std::move(community), edges);
    sub.set_original_ids(std::move(original));
    return sub;
}

Eigen::VectorXd compute_prestige(const Graph& g) {
    if (g.num_nodes() == 0) throw Error("prestige of an empty graph");
    Eigen::VectorXd prestige(static_cast<Eigen::Index>(g.num_nodes()));
    std::size_t max_in = 0;
    for (std::size_t j = 0; j < g.num_nodes(); ++j) max_in = std::max(max_in, g.in_degree(static_cast<NodeId>(j)));
    for (std::size_t j = 0; j < g.num_nodes(); ++j)
        prestige[static_cast<Eigen::Index>(j)] =
            max_in == 0 ? 0.0 : static_cast<double>(g.in_degree(static_cast<NodeId>(j))) / static_cast<double>(max_in);
    return prestige;
}

CentralityMap approx_betweenness(const Graph& g, std::size_t pivots, std::uint64_t seed) {
    const auto n = g.num_nodes();
    if (pivots < 1 || pivots > n) throw Error("pivots must lie in [1, |nodes|]");

    std::vector<NodeId> sources(n);
    std::iota(sources.begin(), sources.end(), 0);
    if (pivots < n) {
        Rng rng = substream(seed, {0x70697674ULL});
        std::shuffle(sources.begin(), sources.end(), rng);
        sources.resize(pivots);
        std::sort(sources.begin(), sources.end());
    }

    Eigen::VectorXd bc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    std::vector<std::int64_t> dist(n);
    std::vector<double> sigma(n), delta(n);
    std::vector<std::vector<NodeId>> preds(n);
    std::vector<NodeId> order;
    order.reserve(n);
    for (auto s : sources) {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto& p : preds) p.clear();
        order.clear();
        dist[s] = 0;
        sigma[s] = 1.0;
        order.push_back(s);
        for (std::size_t head = 0; head < order.size(); ++head) {
            const auto v = order[head];
            for (auto w : g.following(v)) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    order.push_back(w);
                }
                if (dist[w] == dist[v] + 1) {
                    sigma[w] += sigma[v];
                    preds[w].push_back(v);
                }
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const auto w = *it;
            for (auto v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            if (w != s) bc[w] += delta[w];
        }
    }
    bc *= static_cast<double>(n) / static_cast<double>(pivots);
    return CentralityMap{std::move(bc), pivots, pivots == n};
}

}  // namespace tacit
