#ifndef TACIT_WORLD_HPP
#define TACIT_WORLD_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tacit/graph.hpp"
#include "tacit/rng.hpp"
#include "tacit/simlog.hpp"
#include "tacit/types.hpp"

namespace tacit {

/// Parameters of the claim virality draw and of the claim-choice softmax.
struct ViralityParams {
    double z1 = 1.0, z2 = 1.5;
    double alpha1 = 1.0, beta1 = 17.0;
    double alpha2 = 5.0, beta2 = 17.0;
    double r1 = 9.0, r2 = 9.0;
    double q1 = 2.0, q2 = 1.0;
};

struct ScenarioConfig {
    int num_topics = 2;
    int claims_per_topic_per_veracity = 100;
    Eigen::MatrixXd community_impactedness;  // C x topics
    Eigen::MatrixXd community_belief;        // C x topics
    double node_draw_stddev = 0.1;
    double bot_fraction = 0.05;
    double belief_learning_rate = 0.1;
    ViralityParams virality;
    double retweet_scale = 0.6;
    int inbox_read_cap = 20;
    double noise_tweet_share = 0.3;
    double wake_prob = 0.5;

    /// Majority / minority / expert scenario with two topics.
    static ScenarioConfig canonical();

    /// Throws Error describing the first violated constraint.
    void validate() const;
};

enum class NodeKind : std::uint8_t { Normal = 0, Bot = 1 };

struct Claim {
    ClaimId id = 0;
    TopicId topic = 0;
    std::int8_t veracity = 0;  // -1 anti-misinformation, 0 noise, 1 misinformation
    double virality = 0.0;
    std::optional<TimeStep> fact_checked_at;
    bool blocked = false;
};

/// All mutable state of one run. Node attributes are stored column-wise:
/// row j of `belief` is node j's per-topic belief vector.
struct WorldState {
    std::shared_ptr<const Graph> graph;
    ScenarioConfig config;

    std::vector<NodeKind> kind;
    Eigen::MatrixXd belief;
    Eigen::MatrixXd impactedness;
    Eigen::VectorXd prestige;
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> num_read;
    std::vector<std::vector<UtteranceId>> inbox;
    std::vector<std::uint8_t> wake;

    std::vector<Claim> claims;
    TimeStep clock = 0;
    /// Root of every random draw the engine makes (see engine.hpp).
    std::uint64_t stream_seed = 0;

    SimLog log;

    std::size_t num_nodes() const { return kind.size(); }
    int num_topics() const { return config.num_topics; }
};

/// z1 + Beta(alpha1, beta1) for veracity -1/0, z2 + Beta(alpha2, beta2) for 1.
double claim_virality(int veracity, const ViralityParams& params, Rng& rng);

/// Claims are laid out by (topic, veracity, index); this is the id of the first
/// claim of the block K^topic_veracity.
ClaimId claim_block_start(TopicId topic, int veracity, int claims_per_block);

WorldState init_world(std::shared_ptr<const Graph> g, const ScenarioConfig& cfg, std::uint64_t seed);

ScenarioConfig load_scenario(const std::filesystem::path& path);

}  // namespace tacit

#endif  // TACIT_WORLD_HPP
