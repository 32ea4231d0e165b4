#ifndef TACIT_GRAPH_HPP
#define TACIT_GRAPH_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tacit/types.hpp"

namespace tacit {

/// Directed follower network. Edge (a, b) means a follows b, so content
/// authored by b lands in a's inbox.
class Graph {
public:
    Graph() = default;

    /// Builds from an edge list over dense ids. Self-loops and duplicates are dropped.
    Graph(std::vector<CommunityId> community, std::span<const std::pair<NodeId, NodeId>> edges);

    std::size_t num_nodes() const { return community_.size(); }
    std::size_t num_edges() const { return num_edges_; }
    std::size_t num_communities() const { return members_.size(); }

    /// Nodes that `j` follows.
    std::span<const NodeId> following(NodeId j) const { return out_edges_[j]; }
    /// Nodes that follow `j`; the recipients of everything `j` posts.
    std::span<const NodeId> followers(NodeId j) const { return in_edges_[j]; }

    std::size_t in_degree(NodeId j) const { return in_edges_[j].size(); }
    std::size_t out_degree(NodeId j) const { return out_edges_[j].size(); }

    CommunityId community(NodeId j) const { return community_[j]; }
    const std::vector<CommunityId>& communities() const { return community_; }
    std::span<const NodeId> members(CommunityId c) const { return members_[c]; }

    bool has_edge(NodeId follower, NodeId followed) const;

    /// Identifier each dense node had in the source data (identity for synthetic graphs).
    const std::vector<std::int64_t>& original_ids() const { return original_id_; }
    void set_original_ids(std::vector<std::int64_t> ids);

private:
    std::vector<std::vector<NodeId>> out_edges_;
    std::vector<std::vector<NodeId>> in_edges_;
    std::vector<CommunityId> community_;
    std::vector<std::vector<NodeId>> members_;
    std::vector<std::int64_t> original_id_;
    std::size_t num_edges_ = 0;
};

struct CentralityMap {
    Eigen::VectorXd betweenness;
    std::size_t pivot_count = 0;
    bool exact = false;
};

/// Reads `follower_id,followed_id` and `node_id,community_id` CSV files (header optional).
/// Node and community ids are remapped to dense ascending ranges.
Graph load_graph(const std::filesystem::path& edge_list_path, const std::filesystem::path& community_path);

/// Writes `dense_id,original_id,community` rows.
void write_id_map(const Graph& g, const std::filesystem::path& path);

/// Directed stochastic block model. With `popularity_tail` > 0 every node also
/// carries a Pareto popularity weight (tail index 1/popularity_tail, mean 1)
/// that scales its probability of being followed, giving a heavy-tailed
/// follower distribution. `popularity_tail` = 0 is the plain block model.
Graph generate_synthetic_graph(std::span<const int> community_sizes, double p_in, double p_out,
                               std::uint64_t seed, double popularity_tail = 0.0);

/// Node-induced subgraph on a community-stratified uniform sample of
/// ceil(fraction * J) nodes. Relative id order is preserved.
Graph sample_subgraph(const Graph& g, double fraction, std::uint64_t seed);

/// In-degree divided by the maximum in-degree; all zero for an edgeless graph.
Eigen::VectorXd compute_prestige(const Graph& g);

/// Brandes accumulation from `pivots` sampled sources, scaled by J / pivots.
CentralityMap approx_betweenness(const Graph& g, std::size_t pivots, std::uint64_t seed);

}  // namespace tacit

#endif  // TACIT_GRAPH_HPP
