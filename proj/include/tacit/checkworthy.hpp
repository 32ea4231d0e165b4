#ifndef TACIT_CHECKWORTHY_HPP
#define TACIT_CHECKWORTHY_HPP

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tacit/features.hpp"
#include "tacit/gbrt.hpp"
#include "tacit/world.hpp"

namespace tacit {

enum class ClaimSampling { Virality, StratifiedVirality };
enum class LabelStrategy { Random, Stratified, KnowledgeableCommunity };

std::string to_string(ClaimSampling s);
std::string to_string(LabelStrategy s);
ClaimSampling parse_claim_sampling(const std::string& s);
LabelStrategy parse_label_strategy(const std::string& s);

/// Tweets + retweets + reads per claim.
std::vector<std::int64_t> claim_engagement(const SimLog& log);
/// engagement(c, claim): utterances authored and reads made by members of c.
Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> community_engagement(const SimLog& log, const Graph& g);

/// Top `n` claims by network-wide engagement, ties to the lower id. Result is
/// in ascending id order.
std::vector<ClaimId> sample_claims_virality(const SimLog& log, int n);
/// Top floor(n / C) claims per community by community-local engagement,
/// deduplicated and backfilled to `n` from the global ranking.
std::vector<ClaimId> sample_claims_stratified(const SimLog& log, int n, const Graph& g);
std::vector<ClaimId> sample_claims(ClaimSampling s, const SimLog& log, int n, const Graph& g);

/// Probability that `labeler` marks the claim check-worthy.
double label_probability(NodeId labeler, const Claim& claim, const WorldState& w);
int simulate_label(NodeId labeler, const Claim& claim, const WorldState& w, Rng& rng);

/// Community with the lowest mean member belief on `topic`; ties to the lower id.
CommunityId knowledgeable_community(const WorldState& w, TopicId topic);

struct LabelOutcome {
    double y = 0.0;
    std::vector<NodeId> labelers;
};
LabelOutcome aggregate_labels(const Claim& claim, LabelStrategy strategy, int m, const WorldState& w, Rng& rng);

/// (reads + retweets) / utterances of the claim; 0 without utterances.
double engagement_target(const SimLog& log, ClaimId claim);

struct TrainingSet {
    std::vector<ClaimId> claim_ids;
    Eigen::MatrixXd X;
    Eigen::VectorXd y;  // aggregated check-worthiness
    Eigen::VectorXd s;  // reads per utterance
    ClaimSampling claim_strategy = ClaimSampling::Virality;
    LabelStrategy label_strategy = LabelStrategy::Random;
    int m = 0;
    std::vector<std::vector<NodeId>> labelers;
};

struct TrainingOptions {
    int n = 200;
    int m = 30;
    BoostingParams boosting;
};

/// Samples claims from the world's log, simulates labels against its current
/// beliefs and pairs them with rows of `features` (tabulated at the same time).
TrainingSet build_training_set(const WorldState& w, const FeatureTable& features, ClaimSampling claims, LabelStrategy labels,
                               const TrainingOptions& opts, std::uint64_t seed);

struct CheckworthinessModel {
    ClaimSampling claim_strategy = ClaimSampling::Virality;
    LabelStrategy label_strategy = LabelStrategy::Random;
    std::shared_ptr<const GradientBoostedTrees> f1;  // check-worthiness
    std::shared_ptr<const GradientBoostedTrees> f2;  // engagement

    Eigen::VectorXd score(const Eigen::MatrixXd& X) const;
};

CheckworthinessModel train_model(const TrainingSet& data, const BoostingParams& params);

/// clamp(f1, 0, 1) * max(f2, 0), elementwise.
Eigen::VectorXd combine_scores(const Eigen::VectorXd& f1, const Eigen::VectorXd& f2);
Eigen::VectorXd score(const Regressor& f1, const Regressor& f2, const Eigen::MatrixXd& X);

void write_training_set_csv(const TrainingSet& data, const std::filesystem::path& path);

}  // namespace tacit

#endif  // TACIT_CHECKWORTHY_HPP
