#include "tacit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tacit {

Eigen::VectorXd iwcib(const Eigen::MatrixXd& before, const Eigen::MatrixXd& after, const Eigen::MatrixXd& impactedness) {
    if (before.rows() != after.rows() || before.cols() != after.cols() || before.rows() != impactedness.rows() ||
        before.cols() != impactedness.cols())
        throw Error("iwcib: shape mismatch");
    const Eigen::VectorXd totals = impactedness.rowwise().sum();
    if ((totals.array() <= 0.0).any()) throw Error("iwcib: a node has zero total impactedness");
    const Eigen::MatrixXd weights = impactedness.array().colwise() / totals.array();
    return (weights.array() * (after - before).array()).rowwise().sum();
}

double ate(const Eigen::VectorXd& treated, const Eigen::VectorXd& control, std::span<const NodeId> members) {
    if (members.empty()) throw Error("ate: empty member set");
    double sum = 0.0;
    for (auto j : members) {
        if (j < 0 || j >= treated.size() || j >= control.size()) throw Error("ate: node " + std::to_string(j) + " missing");
        sum += treated[j] - control[j];
    }
    return sum / static_cast<double>(members.size());
}

Estimate summarize(std::span<const double> v) {
    if (v.empty()) return {};
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    if (v.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

double structural_virality(std::span<const std::int32_t> parent) {
    const auto n = parent.size();
    if (n < 2) return 0.0;
    // Wiener index: each edge separates subtree(child) from the rest.
    // Parents precede children in utterance order, so a reverse sweep
    // accumulates subtree sizes.
    std::vector<double> sub(n, 1.0);
    double wiener = 0.0;
    for (std::size_t i = n; i-- > 1;) {
        const auto p = parent[i];
        if (p < 0 || static_cast<std::size_t>(p) >= i) throw Error("structural_virality: parents must precede children");
        wiener += sub[i] * (static_cast<double>(n) - sub[i]);
        sub[p] += sub[i];
    }
    return wiener / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

std::vector<CascadeStats> cascade_stats(const SimLog& log) {
    const auto& utt = log.utterances;
    // Group members by root, preserving creation order.
    std::vector<std::int32_t> slot(utt.size(), -1);  // root id -> index into out
    std::vector<CascadeStats> out;
    std::vector<std::vector<UtteranceId>> members;
    for (const auto& u : utt) {
        if (u.is_root()) {
            slot[u.id] = static_cast<std::int32_t>(out.size());
            CascadeStats s;
            s.root = u.id;
            s.claim = u.claim;
            s.veracity = log.claims[u.claim].veracity;
            out.push_back(s);
            members.emplace_back();
        }
        members[slot[u.root]].push_back(u.id);
    }

    std::vector<std::int32_t> local(utt.size(), -1);
    std::vector<std::int32_t> parent;
    std::vector<std::int32_t> per_depth;
    for (std::size_t k = 0; k < out.size(); ++k) {
        auto& s = out[k];
        const auto& m = members[k];
        parent.assign(m.size(), -1);
        per_depth.clear();
        for (std::size_t i = 0; i < m.size(); ++i) {
            const auto& u = utt[m[i]];
            local[u.id] = static_cast<std::int32_t>(i);
            if (!u.is_root()) parent[i] = local[u.parent];
            if (static_cast<std::size_t>(u.depth) >= per_depth.size()) per_depth.resize(static_cast<std::size_t>(u.depth) + 1, 0);
            ++per_depth[static_cast<std::size_t>(u.depth)];
            s.depth = std::max(s.depth, u.depth);
        }
        s.size = static_cast<std::int32_t>(m.size());
        s.max_breadth = *std::max_element(per_depth.begin(), per_depth.end());
        s.structural_virality = structural_virality(parent);
    }

    std::vector<std::pair<std::int32_t, NodeId>> seen;
    seen.reserve(log.reads.size());
    for (const auto& r : log.reads) seen.emplace_back(slot[utt[r.utterance].root], r.node);
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (const auto& [k, node] : seen) ++out[static_cast<std::size_t>(k)].unique_readers;
    return out;
}

std::vector<std::int64_t> utterances_per_claim(const SimLog& log) {
    std::vector<std::int64_t> counts(log.claims.size(), 0);
    for (const auto& u : log.utterances) ++counts[u.claim];
    return counts;
}

std::vector<std::int64_t> cascades_per_claim(const SimLog& log) {
    std::vector<std::int64_t> counts(log.claims.size(), 0);
    for (const auto& u : log.utterances)
        if (u.is_root()) ++counts[u.claim];
    return counts;
}

std::vector<std::pair<double, double>> ccdf(std::span<const double> values) {
    if (values.empty()) throw Error("ccdf: empty input");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0 && v[i] == v[i - 1]) continue;
        out.emplace_back(v[i], static_cast<double>(v.size() - i) / n);
    }
    return out;
}

MisinfoSeries misinfo_read_series(const SimLog& log, const Graph& g, int num_topics, TimeStep horizon) {
    const auto C = g.num_communities();
    MisinfoSeries s(C, std::vector<std::vector<double>>(static_cast<std::size_t>(num_topics),
                                                        std::vector<double>(static_cast<std::size_t>(horizon), 0.0)));
    for (const auto& r : log.reads) {
        const auto& info = log.claims[log.utterances[r.utterance].claim];
        if (info.veracity != 1 || r.t >= horizon) continue;
        s[g.community(r.node)][info.topic][r.t] += 1.0;
    }
    for (std::size_t c = 0; c < C; ++c) {
        const double size = static_cast<double>(g.members(static_cast<CommunityId>(c)).size());
        for (auto& series : s[c]) {
            double run = 0.0;
            for (auto& x : series) {
                run += x;
                x = run / size;
            }
        }
    }
    return s;
}

}  // namespace tacit
