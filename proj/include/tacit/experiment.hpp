#ifndef TACIT_EXPERIMENT_HPP
#define TACIT_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tacit/intervention.hpp"
#include "tacit/metrics.hpp"

namespace tacit {

struct GraphSource {
    // Synthetic block model when `edges` is empty.
    std::filesystem::path edges;
    std::filesystem::path communities;
    std::vector<int> community_sizes{24750, 6600, 1650};
    double p_in = 0.0067;
    double p_out = 0.0007;
    double popularity_tail = 0.3;
};

struct ExperimentConfig {
    ScenarioConfig scenario = ScenarioConfig::canonical();
    GraphSource graph;
    double sample_fraction = 0.15;
    int repetitions = 5;
    TimeStep T = 100;
    TimeStep T_m = 50;
    std::uint64_t master_seed = 1;
    TrainingOptions training;
    FeatureOptions features;
    std::size_t centrality_pivots = 128;
    std::vector<MitigationConfig> grid = full_grid(2);
    int threads = 1;
    bool export_logs = false;  // per-run utterances/reads/beliefs under logs/
    bool write_models = true;  // training sets and model dumps under models/

    void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& cfg);
/// Unknown keys are rejected; the path, if given, anchors relative graph paths.
ExperimentConfig experiment_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment(const std::filesystem::path& path);

/// Seed of repetition r.
std::uint64_t repetition_seed(std::uint64_t master_seed, int r);
/// The full graph every repetition samples from.
Graph build_base_graph(const ExperimentConfig& cfg);

struct RunSummary {
    int repetition = 0;
    std::size_t mitigation = 0;  // index into the grid
    Eigen::VectorXd iwcib;        // per node of the repetition's graph
    std::uint64_t pre_period_hash = 0;
    std::vector<FactCheckRecord> fact_checks;
    std::vector<Eigen::MatrixXi> misinfo_reads;  // per step, community x topic
    std::int64_t misinfo_reads_post = 0;         // reads of misinformation at t >= T_m
    std::int64_t removal_violations = 0;         // events touching a blocked claim after its check
};

struct RepetitionResult {
    int repetition = 0;
    std::shared_ptr<const Graph> graph;
    std::vector<RunSummary> runs;  // grid order
    std::vector<CascadeStats> cascades;         // baseline run
    std::vector<std::int64_t> cascades_per_claim;
    std::vector<std::int64_t> utterances_per_claim;
    std::vector<ClaimInfo> claims;
};

/// Group labels: "community_<c>", "minority" (every community but the
/// largest) and "network".
struct AteRow {
    std::string mitigation;
    std::string group;
    Estimate ate;
    std::vector<double> per_repetition;
};

struct DisparityRow {
    std::string mitigation;
    std::string minority;  // "community_<c>" or "minority"
    double ratio = 0.0;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<RepetitionResult> repetitions;
    std::vector<std::string> failures;  // one line per aborted repetition
    CommunityId majority = 0;
    std::vector<AteRow> ate;             // per grid mitigation
    std::vector<AteRow> component_ate;   // per strategy component, averaged over the grid rows using it
    std::vector<DisparityRow> disparity;
    std::vector<DisparityRow> component_disparity;

    const AteRow& find(const std::string& mitigation, const std::string& group, bool component = false) const;
    double find_disparity(const std::string& mitigation, bool component = false) const;
};

/// Runs one repetition end to end. `out_dir`, when non-empty, receives the
/// per-repetition artifacts (training sets, models, logs).
RepetitionResult run_repetition(const ExperimentConfig& cfg, const Graph& base, int r, const std::filesystem::path& out_dir = {});

ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir = {});

/// Per-mitigation and per-component ATEs and disparity ratios.
void aggregate(ExperimentResult& result);

void write_results(const ExperimentResult& result, const std::filesystem::path& out_dir);

/// Veracity comparison of the cascades of one unmitigated run.
struct CascadeCheck {
    std::uint64_t seed = 0;
    double mean_depth_misinfo = 0, mean_depth_anti = 0;
    double mean_breadth_misinfo = 0, mean_breadth_anti = 0;
    double mean_readers_misinfo = 0, mean_readers_anti = 0;
    std::int64_t max_cascades_per_claim_misinfo = 0, max_cascades_per_claim_anti = 0;
    std::int64_t max_utterances_per_claim_misinfo = 0, max_utterances_per_claim_anti = 0;

    bool deeper() const { return mean_depth_misinfo > mean_depth_anti; }
    bool wider() const { return mean_breadth_misinfo > mean_breadth_anti; }
    bool seen_more() const { return mean_readers_misinfo > mean_readers_anti; }
    bool facts_tweeted_more() const { return max_cascades_per_claim_anti > max_cascades_per_claim_misinfo; }
    /// Same tail comparison on all utterances (root tweets and retweets).
    bool facts_uttered_more() const { return max_utterances_per_claim_anti > max_utterances_per_claim_misinfo; }
    bool pass() const { return deeper() && wider() && seen_more() && facts_tweeted_more(); }
};

CascadeCheck check_cascades(const std::vector<CascadeStats>& cascades, const std::vector<std::int64_t>& cascades_per_claim,
                            const std::vector<std::int64_t>& utterances_per_claim, const std::vector<ClaimInfo>& claims);
/// Baseline runs over `seeds` repetitions (sampled graphs) of the configuration.
std::vector<CascadeCheck> validate_cascades(const ExperimentConfig& cfg, int seeds);

}  // namespace tacit

#endif  // TACIT_EXPERIMENT_HPP
