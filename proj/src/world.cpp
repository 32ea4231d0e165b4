#include "tacit/world.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "tacit/config_json.hpp"

namespace tacit {

ScenarioConfig ScenarioConfig::canonical() {
    ScenarioConfig cfg;
    cfg.community_impactedness.resize(3, 2);
    cfg.community_impactedness << 0.8, 0.2,  // majority
        0.2, 0.8,                            // minority
        0.5, 0.5;                            // expert
    cfg.community_belief.resize(3, 2);
    cfg.community_belief << 0.7, 0.7,
        0.7, 0.7,
        0.1, 0.1;
    return cfg;
}

void ScenarioConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw Error(std::string("invalid scenario: ") + what);
    };
    require(num_topics >= 1, "num_topics >= 1");
    require(claims_per_topic_per_veracity >= 1, "claims_per_topic_per_veracity >= 1");
    require(inbox_read_cap >= 1, "inbox_read_cap >= 1");
    require(community_impactedness.rows() >= 1, "at least one community");
    require(community_impactedness.rows() == community_belief.rows() &&
                community_impactedness.cols() == community_belief.cols(),
            "impactedness and belief matrices share a shape");
    require(community_impactedness.cols() == num_topics, "matrix columns equal num_topics");
    auto unit = [](const Eigen::MatrixXd& m) { return m.size() > 0 && m.minCoeff() >= 0.0 && m.maxCoeff() <= 1.0; };
    require(unit(community_impactedness), "impactedness entries in [0,1]");
    require(unit(community_belief), "belief entries in [0,1]");
    require(node_draw_stddev >= 0.0, "node_draw_stddev >= 0");
    require(bot_fraction >= 0.0 && bot_fraction < 1.0, "bot_fraction in [0,1)");
    require(belief_learning_rate >= 0.0, "belief_learning_rate >= 0");
    const auto& v = virality;
    require(v.z1 > 0 && v.z2 > 0, "z1, z2 > 0");
    require(v.alpha1 > 0 && v.beta1 > 0 && v.alpha2 > 0 && v.beta2 > 0, "Beta parameters > 0");
    require(v.r1 > 0 && v.r2 > 0, "r1, r2 > 0");
    require(v.q1 >= 1 && v.q2 >= 1, "q1, q2 >= 1");
    require(retweet_scale >= 0.0, "retweet_scale >= 0");
    require(noise_tweet_share >= 0.0 && noise_tweet_share <= 1.0, "noise_tweet_share in [0,1]");
    require(wake_prob >= 0.0 && wake_prob <= 1.0, "wake_prob in [0,1]");
}

double claim_virality(int veracity, const ViralityParams& p, Rng& rng) {
    if (veracity == 1) return p.z2 + beta(rng, p.alpha2, p.beta2);
    return p.z1 + beta(rng, p.alpha1, p.beta1);
}

ClaimId claim_block_start(TopicId topic, int veracity, int claims_per_block) {
    return (topic * 3 + (veracity + 1)) * claims_per_block;
}

WorldState init_world(std::shared_ptr<const Graph> g, const ScenarioConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    if (!g) throw Error("init_world needs a graph");
    const auto n = static_cast<Eigen::Index>(g->num_nodes());
    const auto C = static_cast<Eigen::Index>(g->num_communities());
    const int topics = cfg.num_topics;
    if (cfg.community_belief.rows() != C)
        throw Error("scenario describes " + std::to_string(cfg.community_belief.rows()) + " communities but the graph has " +
                    std::to_string(C));

    WorldState w;
    w.graph = g;
    w.config = cfg;
    w.stream_seed = derive_seed(seed, {0x72756eULL});

    Rng rng = substream(seed, {0x696e6974ULL});
    w.belief.resize(n, topics);
    w.impactedness.resize(n, topics);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto c = g->community(static_cast<NodeId>(j));
        for (int k = 0; k < topics; ++k) {
            w.belief(j, k) = std::clamp(normal(rng, cfg.community_belief(c, k), cfg.node_draw_stddev), 0.0, 1.0);
            w.impactedness(j, k) = std::clamp(normal(rng, cfg.community_impactedness(c, k), cfg.node_draw_stddev), 0.0, 1.0);
        }
    }

    w.kind.assign(static_cast<std::size_t>(n), NodeKind::Normal);
    const auto bots = static_cast<std::size_t>(std::llround(cfg.bot_fraction * static_cast<double>(n)));
    std::vector<NodeId> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = 0; i < bots; ++i) {
        const auto k = i + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(order.size() - i));
        std::swap(order[i], order[std::min(k, order.size() - 1)]);
        w.kind[order[i]] = NodeKind::Bot;
    }

    const int per_block = cfg.claims_per_topic_per_veracity;
    w.claims.reserve(static_cast<std::size_t>(topics * 3 * per_block));
    for (TopicId t = 0; t < topics; ++t) {
        for (int v = -1; v <= 1; ++v) {
            for (int i = 0; i < per_block; ++i) {
                Claim c;
                c.id = static_cast<ClaimId>(w.claims.size());
                c.topic = t;
                c.veracity = static_cast<std::int8_t>(v);
                c.virality = claim_virality(v, cfg.virality, rng);
                w.claims.push_back(c);
            }
        }
    }

    w.prestige = compute_prestige(*g);
    w.num_read.setZero(n, topics);
    w.inbox.assign(static_cast<std::size_t>(n), {});
    w.wake.assign(static_cast<std::size_t>(n), 0);
    w.clock = 0;

    w.log.claims.reserve(w.claims.size());
    for (const auto& c : w.claims) w.log.claims.push_back({c.topic, c.veracity, c.virality});
    return w;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(path.string() + ": " + e.what());
    }
    auto cfg = scenario_from_json(j);
    cfg.validate();
    return cfg;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty() || !j.front().is_array()) throw Error("matrix must be a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.front().size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (static_cast<Eigen::Index>(j[r].size()) != cols) throw Error("ragged matrix");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
    }
    return m;
}

nlohmann::json scenario_to_json(const ScenarioConfig& cfg) {
    const auto& v = cfg.virality;
    return {
        {"num_topics", cfg.num_topics},
        {"claims_per_topic_per_veracity", cfg.claims_per_topic_per_veracity},
        {"community_impactedness", matrix_to_json(cfg.community_impactedness)},
        {"community_belief", matrix_to_json(cfg.community_belief)},
        {"node_draw_stddev", cfg.node_draw_stddev},
        {"bot_fraction", cfg.bot_fraction},
        {"belief_learning_rate", cfg.belief_learning_rate},
        {"virality",
         {{"z1", v.z1}, {"z2", v.z2}, {"alpha1", v.alpha1}, {"beta1", v.beta1}, {"alpha2", v.alpha2},
          {"beta2", v.beta2}, {"r1", v.r1}, {"r2", v.r2}, {"q1", v.q1}, {"q2", v.q2}}},
        {"retweet_scale", cfg.retweet_scale},
        {"inbox_read_cap", cfg.inbox_read_cap},
        {"noise_tweet_share", cfg.noise_tweet_share},
        {"wake_prob", cfg.wake_prob},
    };
}

ScenarioConfig scenario_from_json(const nlohmann::json& j, ScenarioConfig cfg) {
    if (!j.is_object()) throw Error("scenario must be a JSON object");
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "num_topics") cfg.num_topics = value.get<int>();
            else if (key == "claims_per_topic_per_veracity") cfg.claims_per_topic_per_veracity = value.get<int>();
            else if (key == "community_impactedness") cfg.community_impactedness = matrix_from_json(value);
            else if (key == "community_belief") cfg.community_belief = matrix_from_json(value);
            else if (key == "node_draw_stddev") cfg.node_draw_stddev = value.get<double>();
            else if (key == "bot_fraction") cfg.bot_fraction = value.get<double>();
            else if (key == "belief_learning_rate") cfg.belief_learning_rate = value.get<double>();
            else if (key == "retweet_scale") cfg.retweet_scale = value.get<double>();
            else if (key == "inbox_read_cap") cfg.inbox_read_cap = value.get<int>();
            else if (key == "noise_tweet_share") cfg.noise_tweet_share = value.get<double>();
            else if (key == "wake_prob") cfg.wake_prob = value.get<double>();
            else if (key == "virality") {
                auto& v = cfg.virality;
                for (const auto& [vk, vv] : value.items()) {
                    const double x = vv.get<double>();
                    if (vk == "z1") v.z1 = x;
                    else if (vk == "z2") v.z2 = x;
                    else if (vk == "alpha1") v.alpha1 = x;
                    else if (vk == "beta1") v.beta1 = x;
                    else if (vk == "alpha2") v.alpha2 = x;
                    else if (vk == "beta2") v.beta2 = x;
                    else if (vk == "r1") v.r1 = x;
                    else if (vk == "r2") v.r2 = x;
                    else if (vk == "q1") v.q1 = x;
                    else if (vk == "q2") v.q2 = x;
                    else throw Error("unknown virality key '" + vk + "'");
                }
            } else {
                throw Error("unknown scenario key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("scenario: ") + e.what());
    }
    return cfg;
}

}  // namespace tacit
