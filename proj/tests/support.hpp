#ifndef TACIT_TESTS_SUPPORT_HPP
#define TACIT_TESTS_SUPPORT_HPP

#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "tacit/engine.hpp"
#include "tacit/log.hpp"

namespace test {

using namespace tacit;

inline std::shared_ptr<const Graph> make_graph(std::vector<CommunityId> community, std::vector<std::pair<NodeId, NodeId>> edges) {
    return std::make_shared<const Graph>(std::move(community), edges);
}

/// Every community at belief / impactedness 0.5, no spread, no bots.
inline ScenarioConfig flat_scenario(int communities, int topics, int claims_per_block) {
    ScenarioConfig cfg;
    cfg.num_topics = topics;
    cfg.claims_per_topic_per_veracity = claims_per_block;
    cfg.community_belief = Eigen::MatrixXd::Constant(communities, topics, 0.5);
    cfg.community_impactedness = Eigen::MatrixXd::Constant(communities, topics, 0.5);
    cfg.node_draw_stddev = 0.0;
    cfg.bot_fraction = 0.0;
    return cfg;
}

/// Appends an utterance to a hand-built log.
inline UtteranceId add_utterance(SimLog& log, ClaimId claim, NodeId author, TimeStep t, UtteranceId parent = kNoParent) {
    Utterance u;
    u.id = static_cast<UtteranceId>(log.utterances.size());
    u.claim = claim;
    u.author = author;
    u.created_at = t;
    u.parent = parent;
    if (parent == kNoParent) {
        u.root = u.id;
    } else {
        u.root = log.utterances[parent].root;
        u.depth = log.utterances[parent].depth + 1;
    }
    log.utterances.push_back(u);
    return u.id;
}

/// Fresh directory under the system temp dir, removed on destruction.
struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& name) : path(std::filesystem::temp_directory_path() / ("tacit_test_" + name)) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::filesystem::path write(const std::string& file, const std::string& text) const {
        std::ofstream(path / file) << text;
        return path / file;
    }
};

/// Silences warnings for the lifetime of the object and counts them.
struct WarningCounter {
    int count = 0;
    WarningCounter() {
        set_warning_sink([this](const std::string&) { ++count; });
    }
    ~WarningCounter() {
        set_warning_sink([](const std::string& m) { std::fprintf(stderr, "warning: %s\n", m.c_str()); });
    }
};

}  // namespace test

#endif  // TACIT_TESTS_SUPPORT_HPP
