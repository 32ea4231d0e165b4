#ifndef TACIT_FEATURES_HPP
#define TACIT_FEATURES_HPP

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tacit/graph.hpp"
#include "tacit/simlog.hpp"

namespace tacit {

struct FeatureOptions {
    std::vector<int> snapshots{1, 2, 5, 10};  // offsets from each cascade's creation
    std::vector<int> depths{1, 2, 3, 4, 5};   // distance of a reader from the origin
};

struct SnapshotFeatures {
    bool present = false;  // some cascade of the claim is at least this old
    double nodes_visited = 0.0;
    double avg_visit_degree = 0.0;
    double max_visit_degree = 0.0;
    double avg_visit_centrality = 0.0;
    double max_visit_centrality = 0.0;
    double max_depth = 0.0;
    std::vector<double> nodes_at_depth;
};

struct FeatureRow {
    ClaimId claim_id = 0;
    TimeStep tabulated_at = 0;
    double avg_origin_degree = 0.0;
    double max_origin_degree = 0.0;
    double avg_origin_centrality = 0.0;
    double max_origin_centrality = 0.0;
    std::vector<SnapshotFeatures> snapshots;  // aligned with FeatureOptions::snapshots
};

struct FeatureTable {
    FeatureOptions options;
    std::vector<FeatureRow> rows;  // ascending claim id

    /// Column names of matrix(), in order.
    std::vector<std::string> columns() const;
    Eigen::MatrixXd matrix() const;
    const FeatureRow* find(ClaimId id) const;
};

std::vector<std::string> feature_columns(const FeatureOptions& opts);
Eigen::RowVectorXd feature_vector(const FeatureRow& row);

/// Incremental tabulation over a growing log. Statistics of a cascade whose
/// every snapshot window has closed are cached, so repeated calls at
/// advancing times only touch recent cascades. Results are identical to
/// tabulate_features on the same inputs.
class FeatureTabulator {
public:
    FeatureTabulator(const Graph& g, const CentralityMap& centrality, FeatureOptions opts = {});

    /// Rows for every claim with a cascade started before `t_now` and no fact
    /// check before `t_now`; restricted to `claims` when given.
    FeatureTable tabulate(const SimLog& log, TimeStep t_now, std::optional<std::span<const ClaimId>> claims = std::nullopt);

    const FeatureOptions& options() const { return opts_; }

private:
    struct Visit {
        TimeStep t;
        NodeId node;
        std::int32_t depth;  // distance of the reader from the origin
    };
    struct Member {
        TimeStep created_at;
        std::int32_t depth;
    };
    struct Window {
        double reads = 0, deg_sum = 0, deg_max = 0, cent_sum = 0, cent_max = 0, max_depth = 0;
        std::vector<double> at_depth;
    };

    void ingest(const SimLog& log);
    const std::vector<Window>& windows(UtteranceId root, TimeStep t_now);
    std::vector<Window> compute_windows(UtteranceId root, TimeStep t_now) const;

    const Graph& graph_;
    const CentralityMap& centrality_;
    FeatureOptions opts_;
    int max_offset_ = 0;

    std::size_t seen_utterances_ = 0;
    std::size_t seen_reads_ = 0;
    std::vector<TimeStep> created_;       // per utterance
    std::vector<UtteranceId> root_of_;    // per utterance
    std::vector<std::vector<UtteranceId>> roots_by_claim_;
    std::vector<std::vector<Member>> members_;  // per root id (empty for non-roots)
    std::vector<std::vector<Visit>> visits_;    // per root id
    std::vector<std::vector<Window>> final_;    // cached closed windows per root id
    std::vector<Window> scratch_;
};

FeatureTable tabulate_features(const SimLog& log, const Graph& g, const CentralityMap& centrality, TimeStep t_now,
                               const FeatureOptions& opts = {});

/// `features.csv` (claim_id, tabulated_at, then feature_columns()) plus a schema file listing the columns.
void write_features_csv(const FeatureTable& table, const std::filesystem::path& path);

}  // namespace tacit

#endif  // TACIT_FEATURES_HPP
