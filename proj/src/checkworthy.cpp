#include "tacit/checkworthy.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "tacit/csv.hpp"
#include "tacit/log.hpp"

namespace tacit {

std::string to_string(ClaimSampling s) { return s == ClaimSampling::Virality ? "Virality" : "StratifiedVirality"; }

std::string to_string(LabelStrategy s) {
    switch (s) {
        case LabelStrategy::Random: return "Random";
        case LabelStrategy::Stratified: return "Stratified";
        case LabelStrategy::KnowledgeableCommunity: return "KnowledgeableCommunity";
    }
    return "?";
}

ClaimSampling parse_claim_sampling(const std::string& s) {
    if (s == "Virality") return ClaimSampling::Virality;
    if (s == "StratifiedVirality") return ClaimSampling::StratifiedVirality;
    throw Error("unknown claim sampling strategy '" + s + "'");
}

LabelStrategy parse_label_strategy(const std::string& s) {
    if (s == "Random") return LabelStrategy::Random;
    if (s == "Stratified") return LabelStrategy::Stratified;
    if (s == "KnowledgeableCommunity") return LabelStrategy::KnowledgeableCommunity;
    throw Error("unknown label strategy '" + s + "'");
}

std::vector<std::int64_t> claim_engagement(const SimLog& log) {
    std::vector<std::int64_t> e(log.claims.size(), 0);
    for (const auto& u : log.utterances) ++e[u.claim];
    for (const auto& r : log.reads) ++e[log.utterances[r.utterance].claim];
    return e;
}

Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> community_engagement(const SimLog& log, const Graph& g) {
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> e =
        Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(static_cast<Eigen::Index>(g.num_communities()),
                                                                         static_cast<Eigen::Index>(log.claims.size()));
    for (const auto& u : log.utterances) ++e(g.community(u.author), u.claim);
    for (const auto& r : log.reads) ++e(g.community(r.node), log.utterances[r.utterance].claim);
    return e;
}

namespace {

// Claims with positive engagement, best first, ties to the lower id.
template <typename Engagement>
std::vector<ClaimId> ranking(const Engagement& e, std::size_t count) {
    std::vector<ClaimId> ids;
    for (std::size_t c = 0; c < count; ++c)
        if (e(c) > 0) ids.push_back(static_cast<ClaimId>(c));
    std::stable_sort(ids.begin(), ids.end(), [&](ClaimId a, ClaimId b) { return e(a) > e(b); });
    return ids;
}

}  // namespace

std::vector<ClaimId> sample_claims_virality(const SimLog& log, int n) {
    if (n < 1) throw Error("sample_claims_virality: n must be >= 1");
    const auto e = claim_engagement(log);
    auto ids = ranking([&](std::size_t c) { return e[c]; }, e.size());
    if (ids.size() < static_cast<std::size_t>(n))
        warn("only " + std::to_string(ids.size()) + " active claims available, fewer than n=" + std::to_string(n));
    else
        ids.resize(static_cast<std::size_t>(n));
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::vector<ClaimId> sample_claims_stratified(const SimLog& log, int n, const Graph& g) {
    const auto C = static_cast<int>(g.num_communities());
    if (n < C) throw Error("sample_claims_stratified: n must be >= number of communities");
    const auto local = community_engagement(log, g);
    const auto per = static_cast<std::size_t>(n / C);
    std::set<ClaimId> chosen;
    for (int c = 0; c < C; ++c) {
        auto ids = ranking([&](std::size_t k) { return local(c, static_cast<Eigen::Index>(k)); }, log.claims.size());
        for (std::size_t i = 0; i < std::min(per, ids.size()); ++i) chosen.insert(ids[i]);
    }
    const auto e = claim_engagement(log);
    for (auto id : ranking([&](std::size_t c) { return e[c]; }, e.size())) {
        if (chosen.size() >= static_cast<std::size_t>(n)) break;
        chosen.insert(id);
    }
    if (chosen.size() < static_cast<std::size_t>(n))
        warn("only " + std::to_string(chosen.size()) + " active claims available, fewer than n=" + std::to_string(n));
    return {chosen.begin(), chosen.end()};
}

std::vector<ClaimId> sample_claims(ClaimSampling s, const SimLog& log, int n, const Graph& g) {
    return s == ClaimSampling::Virality ? sample_claims_virality(log, n) : sample_claims_stratified(log, n, g);
}

double label_probability(NodeId labeler, const Claim& claim, const WorldState& w) {
    const double b = w.belief(labeler, claim.topic);
    switch (claim.veracity) {
        case -1: return 1.0 - b;
        case 1: return b;
        default: return 0.05;
    }
}

int simulate_label(NodeId labeler, const Claim& claim, const WorldState& w, Rng& rng) {
    return bernoulli(rng, label_probability(labeler, claim, w)) ? 1 : 0;
}

CommunityId knowledgeable_community(const WorldState& w, TopicId topic) {
    const auto& g = *w.graph;
    CommunityId best = -1;
    double best_mean = 0.0;
    for (std::size_t c = 0; c < g.num_communities(); ++c) {
        const auto& members = g.members(static_cast<CommunityId>(c));
        if (members.empty()) continue;
        double sum = 0.0;
        for (auto j : members) sum += w.belief(j, topic);
        const double mean = sum / static_cast<double>(members.size());
        if (best < 0 || mean < best_mean) {
            best = static_cast<CommunityId>(c);
            best_mean = mean;
        }
    }
    if (best < 0) throw Error("knowledgeable_community: graph has no members");
    return best;
}

namespace {

// k labelers drawn uniformly from `pool`: without replacement when the pool is
// large enough, otherwise with replacement.
void draw_labelers(std::span<const NodeId> pool, std::size_t k, Rng& rng, std::vector<NodeId>& out) {
    if (pool.empty()) throw Error("no labelers available");
    if (pool.size() < k) {
        warn("labeler pool of " + std::to_string(pool.size()) + " smaller than " + std::to_string(k) + "; sampling with replacement");
        for (std::size_t i = 0; i < k; ++i)
            out.push_back(pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)]);
        return;
    }
    std::vector<NodeId> v(pool.begin(), pool.end());
    for (std::size_t i = 0; i < k; ++i) {
        std::swap(v[i], v[std::uniform_int_distribution<std::size_t>(i, v.size() - 1)(rng)]);
        out.push_back(v[i]);
    }
}

}  // namespace

LabelOutcome aggregate_labels(const Claim& claim, LabelStrategy strategy, int m, const WorldState& w, Rng& rng) {
    if (m < 1) throw Error("aggregate_labels: m must be >= 1");
    const auto& g = *w.graph;
    LabelOutcome out;
    switch (strategy) {
        case LabelStrategy::Random: {
            std::vector<NodeId> all(g.num_nodes());
            std::iota(all.begin(), all.end(), 0);
            draw_labelers(all, static_cast<std::size_t>(m), rng, out.labelers);
            break;
        }
        case LabelStrategy::Stratified: {
            const auto C = g.num_communities();
            if (static_cast<std::size_t>(m) < C) throw Error("aggregate_labels: stratified labeling needs m >= C");
            for (std::size_t c = 0; c < C; ++c)
                draw_labelers(g.members(static_cast<CommunityId>(c)), static_cast<std::size_t>(m) / C, rng, out.labelers);
            break;
        }
        case LabelStrategy::KnowledgeableCommunity:
            draw_labelers(g.members(knowledgeable_community(w, claim.topic)), static_cast<std::size_t>(m), rng, out.labelers);
            break;
    }
    int positive = 0;
    for (auto j : out.labelers) positive += simulate_label(j, claim, w, rng);
    out.y = static_cast<double>(positive) / static_cast<double>(out.labelers.size());
    return out;
}

double engagement_target(const SimLog& log, ClaimId claim) {
    std::int64_t utterances = 0, retweets = 0, reads = 0;
    for (const auto& u : log.utterances) {
        if (u.claim != claim) continue;
        ++utterances;
        if (!u.is_root()) ++retweets;
    }
    for (const auto& r : log.reads)
        if (log.utterances[r.utterance].claim == claim) ++reads;
    return utterances == 0 ? 0.0 : static_cast<double>(reads + retweets) / static_cast<double>(utterances);
}

TrainingSet build_training_set(const WorldState& w, const FeatureTable& features, ClaimSampling claims, LabelStrategy labels,
                               const TrainingOptions& opts, std::uint64_t seed) {
    const auto& log = w.log;
    TrainingSet ts;
    ts.claim_strategy = claims;
    ts.label_strategy = labels;
    ts.m = opts.m;
    for (auto id : sample_claims(claims, log, opts.n, *w.graph))
        if (features.find(id)) ts.claim_ids.push_back(id);
    if (ts.claim_ids.size() < 2) throw Error("training set needs at least two claims with features");

    // Engagement targets in one pass over the log.
    std::vector<std::int64_t> utt(log.claims.size(), 0), inter(log.claims.size(), 0);
    for (const auto& u : log.utterances) {
        ++utt[u.claim];
        if (!u.is_root()) ++inter[u.claim];
    }
    for (const auto& r : log.reads) ++inter[log.utterances[r.utterance].claim];

    const auto rows = static_cast<Eigen::Index>(ts.claim_ids.size());
    ts.X.resize(rows, static_cast<Eigen::Index>(features.columns().size()));
    ts.y.resize(rows);
    ts.s.resize(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto id = ts.claim_ids[static_cast<std::size_t>(i)];
        ts.X.row(i) = feature_vector(*features.find(id));
        Rng rng = substream(seed, {static_cast<std::uint64_t>(id), static_cast<std::uint64_t>(labels)});
        auto outcome = aggregate_labels(w.claims[id], labels, opts.m, w, rng);
        ts.y[i] = outcome.y;
        ts.labelers.push_back(std::move(outcome.labelers));
        ts.s[i] = static_cast<double>(inter[id]) / static_cast<double>(utt[id]);
    }
    return ts;
}

Eigen::VectorXd combine_scores(const Eigen::VectorXd& f1, const Eigen::VectorXd& f2) {
    if (f1.size() != f2.size()) throw Error("combine_scores: size mismatch");
    return (f1.array().min(1.0).max(0.0) * f2.array().max(0.0)).matrix();
}

Eigen::VectorXd score(const Regressor& f1, const Regressor& f2, const Eigen::MatrixXd& X) {
    return combine_scores(f1.predict(X), f2.predict(X));
}

Eigen::VectorXd CheckworthinessModel::score(const Eigen::MatrixXd& X) const {
    if (!f1 || !f2) throw Error("model is not trained");
    return tacit::score(*f1, *f2, X);
}

CheckworthinessModel train_model(const TrainingSet& data, const BoostingParams& params) {
    CheckworthinessModel m;
    m.claim_strategy = data.claim_strategy;
    m.label_strategy = data.label_strategy;
    auto f1 = std::make_shared<GradientBoostedTrees>(params);
    f1->fit(data.X, data.y);
    auto f2 = std::make_shared<GradientBoostedTrees>(params);
    f2->fit(data.X, data.s);
    m.f1 = std::move(f1);
    m.f2 = std::move(f2);
    return m;
}

void write_training_set_csv(const TrainingSet& data, const std::filesystem::path& path) {
    auto out = csv::open_out(path);
    out << "claim_id,y,s,claim_strategy,label_strategy,m,labelers\n";
    for (std::size_t i = 0; i < data.claim_ids.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        out << data.claim_ids[i] << ',' << csv::fmt(data.y[k]) << ',' << csv::fmt(data.s[k]) << ',' << to_string(data.claim_strategy)
            << ',' << to_string(data.label_strategy) << ',' << data.m << ',';
        for (std::size_t j = 0; j < data.labelers[i].size(); ++j) out << (j ? ";" : "") << data.labelers[i][j];
        out << '\n';
    }
}

}  // namespace tacit
