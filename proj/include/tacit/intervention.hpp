#ifndef TACIT_INTERVENTION_HPP
#define TACIT_INTERVENTION_HPP

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tacit/checkworthy.hpp"
#include "tacit/engine.hpp"
#include "tacit/features.hpp"

namespace tacit {

enum class Workflow { None, TopPredicted, TopPredictedByTopic };

std::string to_string(Workflow w);
Workflow parse_workflow(const std::string& s);

struct MitigationConfig {
    ClaimSampling claim_strategy = ClaimSampling::Virality;
    LabelStrategy label_strategy = LabelStrategy::Random;
    Workflow workflow = Workflow::None;
    int z = 2;  // claims fact-checked per step

    bool is_baseline() const { return workflow == Workflow::None || z == 0; }
    /// "M0" for the baseline, otherwise "<claims>/<labels>/<workflow>".
    std::string name() const;
};

/// The twelve strategy combinations followed by the baseline.
std::vector<MitigationConfig> full_grid(int z);

struct FactCheckRecord {
    TimeStep t = 0;
    ClaimId claim = 0;
    double score = 0.0;
    std::int8_t veracity = 0;
    bool blocked = false;
};

/// Every claim selected so far (Z*), each exactly once.
class FactCheckLedger {
public:
    bool contains(ClaimId id) const { return ids_.contains(id); }
    void add(const FactCheckRecord& r);
    const std::vector<FactCheckRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }

private:
    std::set<ClaimId> ids_;
    std::vector<FactCheckRecord> records_;
};

/// Picks claims to check. TopPredicted takes the z best scores overall;
/// TopPredictedByTopic takes the floor(z / num_topics) best per topic. Ties go
/// to the lower id, claims already in the ledger are skipped, and the result is
/// ordered by ascending id.
std::vector<ClaimId> select_for_checking(std::span<const std::pair<ClaimId, double>> scores, Workflow workflow, int z,
                                         std::span<const TopicId> topic_of_claim, int num_topics, const FactCheckLedger& ledger);

/// Perfect-oracle check at the current clock: misinformation is blocked at
/// once, everything else merely joins the ledger.
FactCheckRecord fact_check(ClaimId claim, double score, WorldState& w, FactCheckLedger& ledger);

/// Claims with an utterance created at `t` that are neither checked nor blocked.
std::vector<ClaimId> active_claims(const WorldState& w, TimeStep t, const FactCheckLedger& ledger);

/// Per-step scoring hook: tabulate features of the claims active in the last
/// completed step, score them, select and check.
class FactCheckHook {
public:
    FactCheckHook(const MitigationConfig& cfg, const CheckworthinessModel& model, const Graph& g, const CentralityMap& centrality,
                  const FeatureOptions& features);
    void operator()(WorldState& w);
    const FactCheckLedger& ledger() const { return ledger_; }

private:
    MitigationConfig cfg_;
    const CheckworthinessModel& model_;
    FeatureTabulator tabulator_;
    FactCheckLedger ledger_;
    std::vector<TopicId> topic_of_;
};

struct MitigationRun {
    WorldState world;
    FactCheckLedger ledger;
};

/// Restores `s`, runs to `t_end` with the check hook installed (none for the
/// baseline) and returns the final state.
MitigationRun run_mitigation(const Snapshot& s, std::shared_ptr<const Graph> g, const MitigationConfig& cfg,
                             const CheckworthinessModel* model, const CentralityMap& centrality, const FeatureOptions& features,
                             TimeStep t_end);

/// Events (utterances created, reads made) that reference a blocked claim at
/// or after the step it was checked. Zero for any sound run.
std::int64_t removal_violations(const WorldState& w);

/// `t,claim_id,score,veracity,blocked` rows.
void write_factchecks_csv(const std::vector<FactCheckRecord>& records, const std::filesystem::path& path);

}  // namespace tacit

#endif  // TACIT_INTERVENTION_HPP
