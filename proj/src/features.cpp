#include "tacit/features.hpp"

#include <algorithm>
#include <set>

#include "tacit/csv.hpp"

namespace tacit {

std::vector<std::string> feature_columns(const FeatureOptions& opts) {
    std::vector<std::string> cols{"avg_origin_degree", "max_origin_degree", "avg_origin_centrality", "max_origin_centrality"};
    for (int s : opts.snapshots) {
        const auto p = "s" + std::to_string(s) + "_";
        for (const char* name : {"present", "nodes_visited", "avg_visit_degree", "max_visit_degree", "avg_visit_centrality",
                                 "max_visit_centrality", "max_depth"})
            cols.push_back(p + name);
        for (int d : opts.depths) cols.push_back(p + "nodes_at_depth_" + std::to_string(d));
    }
    return cols;
}

Eigen::RowVectorXd feature_vector(const FeatureRow& row) {
    std::vector<double> v{row.avg_origin_degree, row.max_origin_degree, row.avg_origin_centrality, row.max_origin_centrality};
    for (const auto& s : row.snapshots) {
        v.insert(v.end(), {s.present ? 1.0 : 0.0, s.nodes_visited, s.avg_visit_degree, s.max_visit_degree,
                           s.avg_visit_centrality, s.max_visit_centrality, s.max_depth});
        v.insert(v.end(), s.nodes_at_depth.begin(), s.nodes_at_depth.end());
    }
    return Eigen::Map<const Eigen::RowVectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<std::string> FeatureTable::columns() const { return feature_columns(options); }

Eigen::MatrixXd FeatureTable::matrix() const {
    const auto cols = static_cast<Eigen::Index>(feature_columns(options).size());
    Eigen::MatrixXd X(static_cast<Eigen::Index>(rows.size()), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) X.row(static_cast<Eigen::Index>(i)) = feature_vector(rows[i]);
    return X;
}

const FeatureRow* FeatureTable::find(ClaimId id) const {
    auto it = std::lower_bound(rows.begin(), rows.end(), id, [](const FeatureRow& r, ClaimId c) { return r.claim_id < c; });
    return it != rows.end() && it->claim_id == id ? &*it : nullptr;
}

FeatureTabulator::FeatureTabulator(const Graph& g, const CentralityMap& centrality, FeatureOptions opts)
    : graph_(g), centrality_(centrality), opts_(std::move(opts)) {
    if (!std::is_sorted(opts_.snapshots.begin(), opts_.snapshots.end())) throw Error("snapshot offsets must be ascending");
    if (!opts_.snapshots.empty()) max_offset_ = opts_.snapshots.back();
    if (static_cast<std::size_t>(centrality_.betweenness.size()) != g.num_nodes()) throw Error("centrality map does not match graph");
}

void FeatureTabulator::ingest(const SimLog& log) {
    const auto& utt = log.utterances;
    if (roots_by_claim_.size() < log.claims.size()) roots_by_claim_.resize(log.claims.size());
    created_.resize(utt.size());
    root_of_.resize(utt.size());
    members_.resize(utt.size());
    visits_.resize(utt.size());
    final_.resize(utt.size());
    for (auto i = seen_utterances_; i < utt.size(); ++i) {
        const auto& u = utt[i];
        created_[i] = u.created_at;
        root_of_[i] = u.root;
        if (u.is_root()) roots_by_claim_[u.claim].push_back(u.id);
        members_[u.root].push_back({u.created_at, u.depth});
    }
    seen_utterances_ = utt.size();
    for (auto i = seen_reads_; i < log.reads.size(); ++i) {
        const auto& r = log.reads[i];
        visits_[root_of_[r.utterance]].push_back({r.t, r.node, utt[r.utterance].depth + 1});
    }
    seen_reads_ = log.reads.size();
}

std::vector<FeatureTabulator::Window> FeatureTabulator::compute_windows(UtteranceId root, TimeStep t_now) const {
    std::vector<Window> out(opts_.snapshots.size());
    const auto created = created_[root];
    const auto& visits = visits_[root];
    const auto& members = members_[root];
    for (std::size_t k = 0; k < opts_.snapshots.size(); ++k) {
        auto& w = out[k];
        w.at_depth.assign(opts_.depths.size(), 0.0);
        const TimeStep end = std::min<TimeStep>(created + opts_.snapshots[k], t_now - 1);
        for (const auto& m : members)
            if (m.created_at <= end) w.max_depth = std::max<double>(w.max_depth, m.depth);
        for (const auto& v : visits) {
            if (v.t > end) break;
            const double deg = static_cast<double>(graph_.in_degree(v.node));
            const double cent = centrality_.betweenness[v.node];
            w.reads += 1.0;
            w.deg_sum += deg;
            w.deg_max = std::max(w.deg_max, deg);
            w.cent_sum += cent;
            w.cent_max = std::max(w.cent_max, cent);
            for (std::size_t d = 0; d < opts_.depths.size(); ++d)
                if (opts_.depths[d] == v.depth) w.at_depth[d] += 1.0;
        }
    }
    return out;
}

const std::vector<FeatureTabulator::Window>& FeatureTabulator::windows(UtteranceId root, TimeStep t_now) {
    if (!final_[root].empty()) return final_[root];
    if (created_[root] + max_offset_ < t_now) {
        final_[root] = compute_windows(root, t_now);
        return final_[root];
    }
    scratch_ = compute_windows(root, t_now);
    return scratch_;
}

FeatureTable FeatureTabulator::tabulate(const SimLog& log, TimeStep t_now, std::optional<std::span<const ClaimId>> claims) {
    ingest(log);
    std::set<ClaimId> checked;
    for (const auto& fc : log.fact_checks)
        if (fc.t < t_now) checked.insert(fc.claim);

    std::vector<ClaimId> ids;
    if (claims) {
        ids.assign(claims->begin(), claims->end());
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    } else {
        ids.resize(log.claims.size());
        for (std::size_t c = 0; c < ids.size(); ++c) ids[c] = static_cast<ClaimId>(c);
    }

    FeatureTable table;
    table.options = opts_;
    const auto S = opts_.snapshots.size();
    const auto D = opts_.depths.size();
    for (auto c : ids) {
        if (c < 0 || static_cast<std::size_t>(c) >= roots_by_claim_.size()) throw Error("unknown claim " + std::to_string(c));
        if (checked.contains(c)) continue;
        const auto& all_roots = roots_by_claim_[c];
        const auto live_end = std::partition_point(all_roots.begin(), all_roots.end(), [&](UtteranceId r) { return created_[r] < t_now; });
        const std::span<const UtteranceId> roots(all_roots.begin(), live_end);
        if (roots.empty()) continue;

        FeatureRow row;
        row.claim_id = c;
        row.tabulated_at = t_now;
        for (auto r : roots) {
            const auto author = log.utterances[r].author;
            const double deg = static_cast<double>(graph_.in_degree(author));
            const double cent = centrality_.betweenness[author];
            row.avg_origin_degree += deg;
            row.avg_origin_centrality += cent;
            row.max_origin_degree = std::max(row.max_origin_degree, deg);
            row.max_origin_centrality = std::max(row.max_origin_centrality, cent);
        }
        const double n_roots = static_cast<double>(roots.size());
        row.avg_origin_degree /= n_roots;
        row.avg_origin_centrality /= n_roots;

        std::vector<Window> total(S);
        for (auto& w : total) w.at_depth.assign(D, 0.0);
        for (auto r : roots) {
            const auto& ws = windows(r, t_now);
            for (std::size_t k = 0; k < S; ++k) {
                total[k].reads += ws[k].reads;
                total[k].deg_sum += ws[k].deg_sum;
                total[k].cent_sum += ws[k].cent_sum;
                total[k].deg_max = std::max(total[k].deg_max, ws[k].deg_max);
                total[k].cent_max = std::max(total[k].cent_max, ws[k].cent_max);
                total[k].max_depth = std::max(total[k].max_depth, ws[k].max_depth);
                for (std::size_t d = 0; d < D; ++d) total[k].at_depth[d] += ws[k].at_depth[d];
            }
        }

        const TimeStep oldest = created_[roots.front()];
        row.snapshots.resize(S);
        for (std::size_t k = 0; k < S; ++k) {
            auto& s = row.snapshots[k];
            s.nodes_at_depth.assign(D, 0.0);
            s.present = oldest + opts_.snapshots[k] < t_now;
            if (!s.present) continue;
            const auto& w = total[k];
            s.nodes_visited = w.reads / n_roots;
            s.avg_visit_degree = w.reads > 0 ? w.deg_sum / w.reads : 0.0;
            s.max_visit_degree = w.deg_max;
            s.avg_visit_centrality = w.reads > 0 ? w.cent_sum / w.reads : 0.0;
            s.max_visit_centrality = w.cent_max;
            s.max_depth = w.max_depth;
            for (std::size_t d = 0; d < D; ++d) s.nodes_at_depth[d] = w.at_depth[d] / n_roots;
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

FeatureTable tabulate_features(const SimLog& log, const Graph& g, const CentralityMap& centrality, TimeStep t_now,
                               const FeatureOptions& opts) {
    FeatureTabulator tab(g, centrality, opts);
    return tab.tabulate(log, t_now);
}

void write_features_csv(const FeatureTable& table, const std::filesystem::path& path) {
    const auto cols = table.columns();
    {
        auto out = csv::open_out(path);
        out << "claim_id,tabulated_at";
        for (const auto& c : cols) out << ',' << c;
        out << '\n';
        for (const auto& row : table.rows) {
            out << row.claim_id << ',' << row.tabulated_at;
            const auto v = feature_vector(row);
            for (Eigen::Index i = 0; i < v.size(); ++i) out << ',' << csv::fmt(v[i]);
            out << '\n';
        }
    }
    auto schema = csv::open_out(std::filesystem::path(path).replace_extension(".schema.txt"));
    schema << "claim_id\ntabulated_at\n";
    for (const auto& c : cols) schema << c << '\n';
}

}  // namespace tacit
