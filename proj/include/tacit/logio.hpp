#ifndef TACIT_LOGIO_HPP
#define TACIT_LOGIO_HPP

#include <filesystem>
#include <vector>

#include "tacit/world.hpp"

namespace tacit {

/// CSV export of a finished run: nodes.csv, claims.csv, utterances.csv,
/// reads.csv, fact_checks.csv and belief_checkpoints.csv (one row per node,
/// topic and checkpoint, impactedness alongside).
void write_run_log(const WorldState& w, const std::filesystem::path& dir);

struct LoadedRun {
    SimLog log;
    std::vector<CommunityId> community;  // per node
    Eigen::MatrixXd impactedness;        // node x topic
};

LoadedRun read_run_log(const std::filesystem::path& dir);

}  // namespace tacit

#endif  // TACIT_LOGIO_HPP
