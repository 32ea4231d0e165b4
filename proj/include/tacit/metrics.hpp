#ifndef TACIT_METRICS_HPP
#define TACIT_METRICS_HPP

#include <map>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tacit/graph.hpp"
#include "tacit/simlog.hpp"

namespace tacit {

/// Impactedness-weighted change in belief for one node:
/// sum_k I_k / sum(I) * (after_k - before_k).
template <typename D1, typename D2, typename D3>
double iwcib(const Eigen::MatrixBase<D1>& belief_before, const Eigen::MatrixBase<D2>& belief_after,
             const Eigen::MatrixBase<D3>& impactedness) {
    const double total = impactedness.sum();
    if (!(total > 0.0)) throw Error("iwcib: impactedness sums to zero");
    return (impactedness.array() / total * (belief_after.array() - belief_before.array())).sum();
}

/// Row-wise IWCiB over node x topic matrices.
Eigen::VectorXd iwcib(const Eigen::MatrixXd& belief_before, const Eigen::MatrixXd& belief_after,
                      const Eigen::MatrixXd& impactedness);

/// Mean over `members` of treated - control.
double ate(const Eigen::VectorXd& treated, const Eigen::VectorXd& control, std::span<const NodeId> members);

/// Mean and standard error of repetition-level values.
struct Estimate {
    double mean = 0.0;
    double se = 0.0;
};
Estimate summarize(std::span<const double> per_repetition);

/// Majority ATE over minority ATE.
inline double disparity_ratio(double majority_ate, double minority_ate) { return majority_ate / minority_ate; }

struct CascadeStats {
    UtteranceId root = 0;
    ClaimId claim = 0;
    std::int8_t veracity = 0;
    std::int32_t depth = 0;
    std::int32_t max_breadth = 0;
    std::int32_t size = 0;
    std::int32_t unique_readers = 0;
    double structural_virality = 0.0;
};

/// One entry per root utterance, ordered by root id.
std::vector<CascadeStats> cascade_stats(const SimLog& log);

/// Mean pairwise distance over a tree given by parent pointers (-1 marks the
/// root); 0 for a single node.
double structural_virality(std::span<const std::int32_t> parent);

/// Tweets plus retweets per claim (claims never uttered included with 0).
std::vector<std::int64_t> utterances_per_claim(const SimLog& log);
/// Root tweets (cascades started) per claim.
std::vector<std::int64_t> cascades_per_claim(const SimLog& log);

/// (x, P(X >= x)) at the sorted unique values.
std::vector<std::pair<double, double>> ccdf(std::span<const double> values);

/// series[c][topic][t]: cumulative misinformation reads by members of c up to
/// and including step t, divided by |c|.
using MisinfoSeries = std::vector<std::vector<std::vector<double>>>;
MisinfoSeries misinfo_read_series(const SimLog& log, const Graph& g, int num_topics, TimeStep horizon);

}  // namespace tacit

#endif  // TACIT_METRICS_HPP
