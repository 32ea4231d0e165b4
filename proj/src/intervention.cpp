#include "tacit/intervention.hpp"

#include <algorithm>

#include "tacit/csv.hpp"

namespace tacit {

std::string to_string(Workflow w) {
    switch (w) {
        case Workflow::None: return "None";
        case Workflow::TopPredicted: return "TopPredicted";
        case Workflow::TopPredictedByTopic: return "TopPredictedByTopic";
    }
    return "?";
}

Workflow parse_workflow(const std::string& s) {
    if (s == "None") return Workflow::None;
    if (s == "TopPredicted") return Workflow::TopPredicted;
    if (s == "TopPredictedByTopic") return Workflow::TopPredictedByTopic;
    throw Error("unknown workflow '" + s + "'");
}

std::string MitigationConfig::name() const {
    if (is_baseline()) return "M0";
    return to_string(claim_strategy) + "/" + to_string(label_strategy) + "/" + to_string(workflow);
}

std::vector<MitigationConfig> full_grid(int z) {
    std::vector<MitigationConfig> grid;
    for (auto c : {ClaimSampling::Virality, ClaimSampling::StratifiedVirality})
        for (auto l : {LabelStrategy::Random, LabelStrategy::Stratified, LabelStrategy::KnowledgeableCommunity})
            for (auto w : {Workflow::TopPredicted, Workflow::TopPredictedByTopic}) grid.push_back({c, l, w, z});
    grid.push_back({ClaimSampling::Virality, LabelStrategy::Random, Workflow::None, z});
    return grid;
}

void FactCheckLedger::add(const FactCheckRecord& r) {
    if (!ids_.insert(r.claim).second) throw Error("claim " + std::to_string(r.claim) + " already fact-checked");
    records_.push_back(r);
}

std::vector<ClaimId> select_for_checking(std::span<const std::pair<ClaimId, double>> scores, Workflow workflow, int z,
                                         std::span<const TopicId> topic_of_claim, int num_topics, const FactCheckLedger& ledger) {
    if (workflow == Workflow::None || z <= 0) return {};
    std::vector<std::pair<ClaimId, double>> ranked;
    for (const auto& s : scores)
        if (!ledger.contains(s.first)) ranked.push_back(s);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });

    std::vector<ClaimId> out;
    if (workflow == Workflow::TopPredicted) {
        for (std::size_t i = 0; i < ranked.size() && out.size() < static_cast<std::size_t>(z); ++i) out.push_back(ranked[i].first);
    } else {
        if (z < num_topics) throw Error("TopPredictedByTopic needs z >= number of topics");
        const int per_topic = z / num_topics;
        std::vector<int> taken(static_cast<std::size_t>(num_topics), 0);
        for (const auto& [id, score] : ranked) {
            const auto t = topic_of_claim[static_cast<std::size_t>(id)];
            if (taken[static_cast<std::size_t>(t)] < per_topic) {
                ++taken[static_cast<std::size_t>(t)];
                out.push_back(id);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

FactCheckRecord fact_check(ClaimId claim, double score, WorldState& w, FactCheckLedger& ledger) {
    auto& c = w.claims.at(static_cast<std::size_t>(claim));
    FactCheckRecord r{w.clock, claim, score, c.veracity, c.veracity == 1};
    ledger.add(r);
    c.fact_checked_at = w.clock;
    if (r.blocked) c.blocked = true;
    w.log.fact_checks.push_back({w.clock, claim});
    return r;
}

std::vector<ClaimId> active_claims(const WorldState& w, TimeStep t, const FactCheckLedger& ledger) {
    std::vector<ClaimId> out;
    const auto& utt = w.log.utterances;
    // Utterances are appended in time order: scan back from the end.
    for (auto it = utt.rbegin(); it != utt.rend() && it->created_at >= t; ++it)
        if (it->created_at == t) out.push_back(it->claim);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    std::erase_if(out, [&](ClaimId c) { return ledger.contains(c) || w.claims[static_cast<std::size_t>(c)].blocked; });
    return out;
}

FactCheckHook::FactCheckHook(const MitigationConfig& cfg, const CheckworthinessModel& model, const Graph& g,
                             const CentralityMap& centrality, const FeatureOptions& features)
    : cfg_(cfg), model_(model), tabulator_(g, centrality, features) {}

void FactCheckHook::operator()(WorldState& w) {
    if (w.clock == 0) return;
    if (topic_of_.empty())
        for (const auto& c : w.claims) topic_of_.push_back(c.topic);
    const auto candidates = active_claims(w, w.clock - 1, ledger_);
    if (candidates.empty()) return;
    const auto table = tabulator_.tabulate(w.log, w.clock, candidates);
    if (table.rows.empty()) return;
    const Eigen::VectorXd scores = model_.score(table.matrix());
    std::vector<std::pair<ClaimId, double>> scored;
    for (std::size_t i = 0; i < table.rows.size(); ++i) scored.emplace_back(table.rows[i].claim_id, scores[static_cast<Eigen::Index>(i)]);
    for (auto id : select_for_checking(scored, cfg_.workflow, cfg_.z, topic_of_, w.num_topics(), ledger_)) {
        const auto it = std::find_if(scored.begin(), scored.end(), [&](const auto& p) { return p.first == id; });
        fact_check(id, it->second, w, ledger_);
    }
}

MitigationRun run_mitigation(const Snapshot& s, std::shared_ptr<const Graph> g, const MitigationConfig& cfg,
                             const CheckworthinessModel* model, const CentralityMap& centrality, const FeatureOptions& features,
                             TimeStep t_end) {
    MitigationRun out{restore(s, g), {}};
    if (cfg.is_baseline()) {
        run(out.world, t_end);
        return out;
    }
    if (!model) throw Error("mitigation " + cfg.name() + " requires a trained model");
    if (model->claim_strategy != cfg.claim_strategy || model->label_strategy != cfg.label_strategy)
        throw Error("model trained with " + to_string(model->claim_strategy) + "/" + to_string(model->label_strategy) +
                    " does not match mitigation " + cfg.name());
    FactCheckHook hook(cfg, *model, *g, centrality, features);
    run(out.world, t_end, [&](WorldState& w) { hook(w); });
    out.ledger = hook.ledger();
    return out;
}

std::int64_t removal_violations(const WorldState& w) {
    const auto blocked_from = [&](ClaimId c) -> std::optional<TimeStep> {
        const auto& claim = w.claims[c];
        if (!claim.blocked) return std::nullopt;
        return claim.fact_checked_at;
    };
    std::int64_t count = 0;
    for (const auto& u : w.log.utterances)
        if (const auto t = blocked_from(u.claim); t && u.created_at >= *t) ++count;
    for (const auto& r : w.log.reads)
        if (const auto t = blocked_from(w.log.utterances[r.utterance].claim); t && r.t >= *t) ++count;
    return count;
}

void write_factchecks_csv(const std::vector<FactCheckRecord>& records, const std::filesystem::path& path) {
    auto out = csv::open_out(path);
    out << "t,claim_id,score,veracity,blocked\n";
    for (const auto& r : records)
        out << r.t << ',' << r.claim << ',' << csv::fmt(r.score) << ',' << int(r.veracity) << ',' << (r.blocked ? 1 : 0) << '\n';
}

}  // namespace tacit
