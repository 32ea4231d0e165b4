#ifndef TACIT_SIMLOG_HPP
#define TACIT_SIMLOG_HPP

#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "tacit/types.hpp"

namespace tacit {

struct Utterance {
    UtteranceId id = 0;
    ClaimId claim = 0;
    NodeId author = 0;
    TimeStep created_at = 0;
    UtteranceId parent = kNoParent;  // kNoParent for a root tweet
    UtteranceId root = 0;            // id of the cascade root (self for roots)
    std::int32_t depth = 0;

    bool is_root() const { return parent == kNoParent; }
};

struct ReadEvent {
    NodeId node = 0;
    UtteranceId utterance = 0;
    TimeStep t = 0;
};

/// Static description of a claim, copied into the log so that downstream
/// analysis needs nothing but the log and the graph.
struct ClaimInfo {
    TopicId topic = 0;
    std::int8_t veracity = 0;
    double virality = 0.0;
};

struct FactCheckEvent {
    TimeStep t = 0;
    ClaimId claim = 0;
};

/// Append-only record of one simulation run.
struct SimLog {
    std::vector<ClaimInfo> claims;
    std::vector<Utterance> utterances;
    std::vector<ReadEvent> reads;
    std::vector<FactCheckEvent> fact_checks;
    /// Node x topic belief matrices keyed by the clock value at which they were taken.
    std::map<TimeStep, Eigen::MatrixXd> belief_checkpoints;
    /// misinfo_reads[t](c, topic): reads of misinformation at step t by members of c.
    std::vector<Eigen::MatrixXi> misinfo_reads;

    /// FNV-1a over every utterance and read with timestamp < `before`.
    std::uint64_t event_hash(TimeStep before) const;
};

}  // namespace tacit

#endif  // TACIT_SIMLOG_HPP
