#ifndef TACIT_ENGINE_HPP
#define TACIT_ENGINE_HPP

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tacit/world.hpp"

namespace tacit {

// Randomness: every node turn draws from its own generator keyed by
// (stream_seed, clock, node). A change in one node's behaviour therefore never
// shifts the random numbers any other node turn sees, and the only state to
// persist is stream_seed plus the clock.

/// Numerically stable softmax of a dense vector expression.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> softmax(const Eigen::MatrixBase<Derived>& logits) {
    using Scalar = typename Derived::Scalar;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> e = (logits.array() - logits.maxCoeff()).exp().matrix();
    return e / e.sum();
}

/// Claim-choice distribution softmax(r * f^q) over a vector of viralities.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> claim_choice_probabilities(const Eigen::MatrixBase<Derived>& virality,
                                                                                      typename Derived::Scalar r,
                                                                                      typename Derived::Scalar q) {
    return softmax((r * virality.array().pow(q)).matrix());
}

/// One belief update after reading an utterance of veracity `veracity`:
/// clamp(b + alpha / (n + 1) * veracity * (1 + impactedness)) into [0, 1].
inline double update_belief(double b, double alpha, std::int64_t n, int veracity, double impactedness) {
    const double next = b + alpha * (1.0 / static_cast<double>(n + 1)) * veracity * (1.0 + impactedness);
    return std::clamp(next, 0.0, 1.0);
}

/// Applies update_belief to node j's topic and bumps its read counter.
double update_belief(NodeId node, TopicId topic, int veracity, WorldState& w);

/// min(1, retweet_scale * prestige(origin) * virality * factor(veracity, belief)).
double retweet_probability(NodeId node, const Utterance& u, const WorldState& w);

/// Chooses topic, veracity and claim for a node that passed the tweet gate and
/// posts the utterance. Returns nothing when every candidate claim is blocked.
std::optional<UtteranceId> select_tweet(NodeId node, WorldState& w, Rng& rng);

/// One pass of every node over its turn, then clock += 1.
void step(WorldState& w);

/// Called with the clock at each step boundary t (before step t executes).
using StepHook = std::function<void(WorldState&)>;

/// Steps until clock == t_end, invoking `hook` at every boundary first.
void run(WorldState& w, TimeStep t_end, const StepHook& hook = {});

/// Stores the current belief matrix under the current clock value.
void record_belief_checkpoint(WorldState& w);

/// Versioned binary image of a WorldState, including its log.
struct Snapshot {
    std::string bytes;
    bool operator==(const Snapshot&) const = default;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

Snapshot snapshot(const WorldState& w);
WorldState restore(const Snapshot& s, std::shared_ptr<const Graph> g);

void save_snapshot(const Snapshot& s, const std::filesystem::path& path);
Snapshot load_snapshot(const std::filesystem::path& path);

}  // namespace tacit

#endif  // TACIT_ENGINE_HPP
