#include "tacit/logio.hpp"

#include <algorithm>

#include "tacit/csv.hpp"

namespace tacit {

void write_run_log(const WorldState& w, const std::filesystem::path& dir) {
    const auto& g = *w.graph;
    const auto& log = w.log;
    {
        auto out = csv::open_out(dir / "nodes.csv");
        out << "node,original_id,community,kind\n";
        for (std::size_t j = 0; j < g.num_nodes(); ++j)
            out << j << ',' << g.original_ids()[j] << ',' << g.community(static_cast<NodeId>(j)) << ','
                << (w.kind[j] == NodeKind::Bot ? "bot" : "normal") << '\n';
    }
    {
        auto out = csv::open_out(dir / "claims.csv");
        out << "claim_id,topic,veracity,virality,blocked,fact_checked_at\n";
        for (const auto& c : w.claims)
            out << c.id << ',' << c.topic << ',' << int(c.veracity) << ',' << csv::fmt(c.virality) << ',' << (c.blocked ? 1 : 0) << ','
                << (c.fact_checked_at ? std::to_string(*c.fact_checked_at) : "") << '\n';
    }
    {
        auto out = csv::open_out(dir / "utterances.csv");
        out << "utterance_id,claim_id,author,created_at,parent,root,depth\n";
        for (const auto& u : log.utterances)
            out << u.id << ',' << u.claim << ',' << u.author << ',' << u.created_at << ',' << u.parent << ',' << u.root << ',' << u.depth
                << '\n';
    }
    {
        auto out = csv::open_out(dir / "reads.csv");
        out << "node,utterance_id,t\n";
        for (const auto& r : log.reads) out << r.node << ',' << r.utterance << ',' << r.t << '\n';
    }
    {
        auto out = csv::open_out(dir / "fact_checks.csv");
        out << "t,claim_id\n";
        for (const auto& f : log.fact_checks) out << f.t << ',' << f.claim << '\n';
    }
    auto out = csv::open_out(dir / "belief_checkpoints.csv");
    out << "t,node,topic,belief,impactedness\n";
    for (const auto& [t, b] : log.belief_checkpoints)
        for (Eigen::Index j = 0; j < b.rows(); ++j)
            for (Eigen::Index k = 0; k < b.cols(); ++k)
                out << t << ',' << j << ',' << k << ',' << csv::fmt(b(j, k)) << ',' << csv::fmt(w.impactedness(j, k)) << '\n';
}

LoadedRun read_run_log(const std::filesystem::path& dir) {
    LoadedRun run;
    for (const auto& row : csv::read(dir / "nodes.csv", true)) run.community.push_back(static_cast<CommunityId>(csv::to_int(row, 2)));
    for (const auto& row : csv::read(dir / "claims.csv", true))
        run.log.claims.push_back({static_cast<TopicId>(csv::to_int(row, 1)), static_cast<std::int8_t>(csv::to_int(row, 2)),
                                  csv::to_double(row, 3)});
    for (const auto& row : csv::read(dir / "utterances.csv", true)) {
        Utterance u;
        u.id = static_cast<UtteranceId>(csv::to_int(row, 0));
        u.claim = static_cast<ClaimId>(csv::to_int(row, 1));
        u.author = static_cast<NodeId>(csv::to_int(row, 2));
        u.created_at = static_cast<TimeStep>(csv::to_int(row, 3));
        u.parent = static_cast<UtteranceId>(csv::to_int(row, 4));
        u.root = static_cast<UtteranceId>(csv::to_int(row, 5));
        u.depth = static_cast<std::int32_t>(csv::to_int(row, 6));
        if (u.id != static_cast<UtteranceId>(run.log.utterances.size())) throw Error("utterances.csv: ids must be dense and ordered");
        run.log.utterances.push_back(u);
    }
    for (const auto& row : csv::read(dir / "reads.csv", true))
        run.log.reads.push_back({static_cast<NodeId>(csv::to_int(row, 0)), static_cast<UtteranceId>(csv::to_int(row, 1)),
                                 static_cast<TimeStep>(csv::to_int(row, 2))});
    for (const auto& row : csv::read(dir / "fact_checks.csv", true))
        run.log.fact_checks.push_back({static_cast<TimeStep>(csv::to_int(row, 0)), static_cast<ClaimId>(csv::to_int(row, 1))});

    const auto n = static_cast<Eigen::Index>(run.community.size());
    int topics = 0;
    const auto rows = csv::read(dir / "belief_checkpoints.csv", true);
    for (const auto& row : rows) topics = std::max(topics, static_cast<int>(csv::to_int(row, 2)) + 1);
    run.impactedness = Eigen::MatrixXd::Zero(n, topics);
    for (const auto& row : rows) {
        const auto t = static_cast<TimeStep>(csv::to_int(row, 0));
        const auto j = csv::to_int(row, 1);
        const auto k = csv::to_int(row, 2);
        if (j < 0 || j >= n) throw Error("belief_checkpoints.csv: node out of range at line " + std::to_string(row.line));
        auto& b = run.log.belief_checkpoints[t];
        if (b.size() == 0) b = Eigen::MatrixXd::Zero(n, topics);
        b(j, k) = csv::to_double(row, 3);
        run.impactedness(j, k) = csv::to_double(row, 4);
    }
    return run;
}

}  // namespace tacit
