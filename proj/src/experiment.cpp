#include "tacit/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include "tacit/config_json.hpp"
#include "tacit/csv.hpp"
#include "tacit/log.hpp"
#include "tacit/logio.hpp"

namespace tacit {

namespace {

// Substream keys.
enum : std::uint64_t { kGraphKey = 1, kSampleKey, kWorldKey, kCentralityKey, kLabelKey, kRepetitionKey = 100 };

std::string slug(const std::string& name) {
    std::string s = name;
    std::replace(s.begin(), s.end(), '/', '_');
    return s;
}

std::string community_group(std::size_t c) { return "community_" + std::to_string(c); }

}  // namespace

void ExperimentConfig::validate() const {
    scenario.validate();
    if (!(T_m >= 0 && T_m < T)) throw Error("config: need 0 <= T_m < T");
    if (repetitions < 1) throw Error("config: repetitions must be >= 1");
    if (!(sample_fraction > 0.0 && sample_fraction <= 1.0)) throw Error("config: sample_fraction must be in (0, 1]");
    if (threads < 1) throw Error("config: threads must be >= 1");
    if (training.n < 1 || training.m < 1) throw Error("config: training n and m must be >= 1");
    if (graph.edges.empty() && static_cast<Eigen::Index>(graph.community_sizes.size()) != scenario.community_belief.rows())
        throw Error("config: synthetic community count differs from the scenario's");
    std::size_t baselines = 0;
    std::set<std::string> names;
    for (const auto& m : grid) {
        if (m.is_baseline()) ++baselines;
        if (!names.insert(m.name()).second) throw Error("config: duplicate mitigation " + m.name());
        if (m.workflow == Workflow::TopPredictedByTopic && m.z < scenario.num_topics)
            throw Error("config: TopPredictedByTopic needs z >= number of topics");
    }
    if (baselines != 1) throw Error("config: the grid must contain the no-mitigation baseline exactly once");
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
    nlohmann::json grid = nlohmann::json::array();
    for (const auto& m : cfg.grid)
        grid.push_back({{"claim_strategy", to_string(m.claim_strategy)},
                        {"label_strategy", to_string(m.label_strategy)},
                        {"workflow", to_string(m.workflow)},
                        {"z", m.z}});
    nlohmann::json graph;
    if (cfg.graph.edges.empty())
        graph = {{"community_sizes", cfg.graph.community_sizes},
                 {"p_in", cfg.graph.p_in},
                 {"p_out", cfg.graph.p_out},
                 {"popularity_tail", cfg.graph.popularity_tail}};
    else
        graph = {{"edges", cfg.graph.edges.string()}, {"communities", cfg.graph.communities.string()}};
    const auto& b = cfg.training.boosting;
    return {
        {"scenario", scenario_to_json(cfg.scenario)},
        {"graph", graph},
        {"sample_fraction", cfg.sample_fraction},
        {"repetitions", cfg.repetitions},
        {"T", cfg.T},
        {"T_m", cfg.T_m},
        {"master_seed", cfg.master_seed},
        {"training",
         {{"n", cfg.training.n},
          {"m", cfg.training.m},
          {"boosting",
           {{"n_trees", b.n_trees}, {"learning_rate", b.learning_rate}, {"max_depth", b.max_depth}, {"min_leaf", b.min_leaf}, {"seed", b.seed}}}}},
        {"features", {{"snapshots", cfg.features.snapshots}, {"depths", cfg.features.depths}}},
        {"centrality_pivots", cfg.centrality_pivots},
        {"grid", grid},
        {"threads", cfg.threads},
        {"export_logs", cfg.export_logs},
        {"write_models", cfg.write_models},
    };
}

namespace {

template <typename F>
void for_each_key(const nlohmann::json& j, const char* what, F&& f) {
    if (!j.is_object()) throw Error(std::string(what) + " must be a JSON object");
    for (const auto& [k, v] : j.items())
        if (!f(k, v)) throw Error(std::string("unknown ") + what + " key '" + k + "'");
}

}  // namespace

ExperimentConfig experiment_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    ExperimentConfig cfg;
    int z = 2;
    std::optional<nlohmann::json> grid;
    try {
        for_each_key(j, "config", [&](const std::string& k, const nlohmann::json& v) {
            if (k == "scenario") cfg.scenario = scenario_from_json(v);
            else if (k == "graph") {
                for_each_key(v, "graph", [&](const std::string& gk, const nlohmann::json& gv) {
                    auto path = [&](const nlohmann::json& p) {
                        std::filesystem::path r = p.get<std::string>();
                        return r.is_relative() && !base_dir.empty() ? base_dir / r : r;
                    };
                    if (gk == "edges") cfg.graph.edges = path(gv);
                    else if (gk == "communities") cfg.graph.communities = path(gv);
                    else if (gk == "community_sizes") cfg.graph.community_sizes = gv.get<std::vector<int>>();
                    else if (gk == "p_in") cfg.graph.p_in = gv.get<double>();
                    else if (gk == "p_out") cfg.graph.p_out = gv.get<double>();
                    else if (gk == "popularity_tail") cfg.graph.popularity_tail = gv.get<double>();
                    else return false;
                    return true;
                });
            } else if (k == "sample_fraction") cfg.sample_fraction = v.get<double>();
            else if (k == "repetitions") cfg.repetitions = v.get<int>();
            else if (k == "T") cfg.T = v.get<TimeStep>();
            else if (k == "T_m") cfg.T_m = v.get<TimeStep>();
            else if (k == "master_seed") cfg.master_seed = v.get<std::uint64_t>();
            else if (k == "training") {
                for_each_key(v, "training", [&](const std::string& tk, const nlohmann::json& tv) {
                    if (tk == "n") cfg.training.n = tv.get<int>();
                    else if (tk == "m") cfg.training.m = tv.get<int>();
                    else if (tk == "boosting") {
                        auto& b = cfg.training.boosting;
                        for_each_key(tv, "boosting", [&](const std::string& bk, const nlohmann::json& bv) {
                            if (bk == "n_trees") b.n_trees = bv.get<int>();
                            else if (bk == "learning_rate") b.learning_rate = bv.get<double>();
                            else if (bk == "max_depth") b.max_depth = bv.get<int>();
                            else if (bk == "min_leaf") b.min_leaf = bv.get<int>();
                            else if (bk == "seed") b.seed = bv.get<std::uint64_t>();
                            else return false;
                            return true;
                        });
                    } else return false;
                    return true;
                });
            } else if (k == "features") {
                for_each_key(v, "features", [&](const std::string& fk, const nlohmann::json& fv) {
                    if (fk == "snapshots") cfg.features.snapshots = fv.get<std::vector<int>>();
                    else if (fk == "depths") cfg.features.depths = fv.get<std::vector<int>>();
                    else return false;
                    return true;
                });
            } else if (k == "centrality_pivots") cfg.centrality_pivots = v.get<std::size_t>();
            else if (k == "z") z = v.get<int>();
            else if (k == "grid") grid = v;
            else if (k == "threads") cfg.threads = v.get<int>();
            else if (k == "export_logs") cfg.export_logs = v.get<bool>();
            else if (k == "write_models") cfg.write_models = v.get<bool>();
            else return false;
            return true;
        });
        if (!grid || (grid->is_string() && grid->get<std::string>() == "full")) {
            cfg.grid = full_grid(z);
        } else if (grid->is_array()) {
            cfg.grid.clear();
            for (const auto& m : *grid) {
                MitigationConfig mc;
                mc.z = z;
                for_each_key(m, "grid entry", [&](const std::string& mk, const nlohmann::json& mv) {
                    if (mk == "claim_strategy") mc.claim_strategy = parse_claim_sampling(mv.get<std::string>());
                    else if (mk == "label_strategy") mc.label_strategy = parse_label_strategy(mv.get<std::string>());
                    else if (mk == "workflow") mc.workflow = parse_workflow(mv.get<std::string>());
                    else if (mk == "z") mc.z = mv.get<int>();
                    else return false;
                    return true;
                });
                cfg.grid.push_back(mc);
            }
        } else {
            throw Error("grid must be \"full\" or a list of mitigations");
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(path.string() + ": " + e.what());
    }
    return experiment_from_json(j, path.parent_path());
}

std::uint64_t repetition_seed(std::uint64_t master_seed, int r) {
    return derive_seed(master_seed, {kRepetitionKey, static_cast<std::uint64_t>(r)});
}

Graph build_base_graph(const ExperimentConfig& cfg) {
    if (!cfg.graph.edges.empty()) return load_graph(cfg.graph.edges, cfg.graph.communities);
    return generate_synthetic_graph(cfg.graph.community_sizes, cfg.graph.p_in, cfg.graph.p_out,
                                    derive_seed(cfg.master_seed, {kGraphKey}), cfg.graph.popularity_tail);
}

namespace {

std::shared_ptr<const Graph> repetition_graph(const ExperimentConfig& cfg, const Graph& base, std::uint64_t seed) {
    if (cfg.sample_fraction >= 1.0) return std::make_shared<const Graph>(base);
    return std::make_shared<const Graph>(sample_subgraph(base, cfg.sample_fraction, derive_seed(seed, {kSampleKey})));
}

template <typename F>
void parallel_for(std::size_t count, int threads, F&& f) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min<int>(threads, static_cast<int>(count)); ++t)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < count;) {
                try {
                    f(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

RepetitionResult run_repetition(const ExperimentConfig& cfg, const Graph& base, int r, const std::filesystem::path& out_dir) {
    const auto seed = repetition_seed(cfg.master_seed, r);
    RepetitionResult res;
    res.repetition = r;
    res.graph = repetition_graph(cfg, base, seed);
    const auto& g = *res.graph;

    WorldState w = init_world(res.graph, cfg.scenario, derive_seed(seed, {kWorldKey}));
    run(w, cfg.T_m);
    record_belief_checkpoint(w);
    const Snapshot snap = snapshot(w);
    const Eigen::MatrixXd belief_tm = w.belief;
    const Eigen::MatrixXd impact = w.impactedness;

    const auto centrality = approx_betweenness(g, std::min(cfg.centrality_pivots, g.num_nodes()), derive_seed(seed, {kCentralityKey}));
    const auto features = tabulate_features(w.log, g, centrality, cfg.T_m, cfg.features);

    std::map<std::pair<int, int>, CheckworthinessModel> models;
    for (const auto& m : cfg.grid) {
        if (m.is_baseline()) continue;
        const std::pair key{static_cast<int>(m.claim_strategy), static_cast<int>(m.label_strategy)};
        if (models.contains(key)) continue;
        const auto data = build_training_set(w, features, m.claim_strategy, m.label_strategy, cfg.training, derive_seed(seed, {kLabelKey}));
        models[key] = train_model(data, cfg.training.boosting);
        if (cfg.write_models && !out_dir.empty()) {
            const auto stem = "rep" + std::to_string(r) + "_" + to_string(m.claim_strategy) + "_" + to_string(m.label_strategy);
            write_training_set_csv(data, out_dir / "models" / (stem + "_training_set.csv"));
            models[key].f1->save(out_dir / "models" / (stem + "_f1.json"));
            models[key].f2->save(out_dir / "models" / (stem + "_f2.json"));
        }
    }
    if (cfg.write_models && !out_dir.empty()) write_features_csv(features, out_dir / "models" / ("rep" + std::to_string(r) + "_features.csv"));
    w = WorldState{};  // release the pre-period log

    res.runs.resize(cfg.grid.size());
    parallel_for(cfg.grid.size(), cfg.threads, [&](std::size_t i) {
        const auto& m = cfg.grid[i];
        const CheckworthinessModel* model = nullptr;
        if (!m.is_baseline()) model = &models.at({static_cast<int>(m.claim_strategy), static_cast<int>(m.label_strategy)});
        auto mr = run_mitigation(snap, res.graph, m, model, centrality, cfg.features, cfg.T);
        record_belief_checkpoint(mr.world);
        auto& s = res.runs[i];
        s.repetition = r;
        s.mitigation = i;
        s.iwcib = iwcib(belief_tm, mr.world.belief, impact);
        s.pre_period_hash = mr.world.log.event_hash(cfg.T_m);
        s.removal_violations = removal_violations(mr.world);
        s.fact_checks = mr.ledger.records();
        s.misinfo_reads = mr.world.log.misinfo_reads;
        for (std::size_t t = static_cast<std::size_t>(cfg.T_m); t < s.misinfo_reads.size(); ++t) s.misinfo_reads_post += s.misinfo_reads[t].sum();
        if (m.is_baseline()) {
            res.cascades = cascade_stats(mr.world.log);
            res.cascades_per_claim = cascades_per_claim(mr.world.log);
            res.utterances_per_claim = utterances_per_claim(mr.world.log);
            res.claims = mr.world.log.claims;
        }
        if (cfg.export_logs && !out_dir.empty())
            write_run_log(mr.world, out_dir / "logs" / ("rep" + std::to_string(r)) / slug(m.name()));
    });
    return res;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    cfg.validate();
    ExperimentResult result;
    result.config = cfg;
    const Graph base = build_base_graph(cfg);
    for (int r = 0; r < cfg.repetitions; ++r) {
        try {
            result.repetitions.push_back(run_repetition(cfg, base, r, out_dir));
        } catch (const std::exception& e) {
            result.failures.push_back("repetition " + std::to_string(r) + ": " + e.what());
            warn(result.failures.back());
        }
    }
    aggregate(result);
    if (!out_dir.empty()) write_results(result, out_dir);
    return result;
}

namespace {

struct GroupDef {
    std::string name;
    std::vector<NodeId> members;
};

std::vector<GroupDef> groups_of(const Graph& g, CommunityId majority) {
    std::vector<GroupDef> out;
    GroupDef minority{"minority", {}}, network{"network", {}};
    for (std::size_t c = 0; c < g.num_communities(); ++c) {
        const auto m = g.members(static_cast<CommunityId>(c));
        out.push_back({community_group(c), {m.begin(), m.end()}});
        if (static_cast<CommunityId>(c) != majority) minority.members.insert(minority.members.end(), m.begin(), m.end());
    }
    for (std::size_t j = 0; j < g.num_nodes(); ++j) network.members.push_back(static_cast<NodeId>(j));
    std::sort(minority.members.begin(), minority.members.end());
    if (!minority.members.empty()) out.push_back(std::move(minority));
    out.push_back(std::move(network));
    return out;
}

std::vector<std::string> components_of(const MitigationConfig& m) {
    return {to_string(m.claim_strategy), to_string(m.label_strategy), to_string(m.workflow)};
}

}  // namespace

void aggregate(ExperimentResult& res) {
    res.ate.clear();
    res.component_ate.clear();
    res.disparity.clear();
    res.component_disparity.clear();
    if (res.repetitions.empty()) return;
    const auto& grid = res.config.grid;
    const auto baseline = static_cast<std::size_t>(
        std::find_if(grid.begin(), grid.end(), [](const MitigationConfig& m) { return m.is_baseline(); }) - grid.begin());

    const auto& g0 = *res.repetitions.front().graph;
    res.majority = 0;
    for (std::size_t c = 1; c < g0.num_communities(); ++c)
        if (g0.members(static_cast<CommunityId>(c)).size() > g0.members(res.majority).size()) res.majority = static_cast<CommunityId>(c);
    const auto group_names = [&] {
        std::vector<std::string> n;
        for (const auto& d : groups_of(g0, res.majority)) n.push_back(d.name);
        return n;
    }();

    // per_rep[mitigation][group][rep]
    std::vector<std::vector<std::vector<double>>> per_rep(grid.size(), std::vector<std::vector<double>>(group_names.size()));
    for (const auto& rep : res.repetitions) {
        const auto groups = groups_of(*rep.graph, res.majority);
        if (groups.size() != group_names.size()) throw Error("repetitions disagree on community structure");
        const auto& control = rep.runs[baseline].iwcib;
        for (std::size_t i = 0; i < grid.size(); ++i)
            for (std::size_t k = 0; k < groups.size(); ++k)
                per_rep[i][k].push_back(ate(rep.runs[i].iwcib, control, groups[k].members));
    }

    const auto group_index = [&](const std::string& name) {
        return static_cast<std::size_t>(std::find(group_names.begin(), group_names.end(), name) - group_names.begin());
    };
    const auto add_disparity = [&](std::vector<DisparityRow>& out, const std::string& name, const std::vector<AteRow>& rows) {
        const auto first = rows.size() - group_names.size();
        const double major = rows[first + group_index(community_group(static_cast<std::size_t>(res.majority)))].ate.mean;
        for (std::size_t k = 0; k < group_names.size(); ++k) {
            const auto& gname = group_names[k];
            if (gname == "network" || gname == community_group(static_cast<std::size_t>(res.majority))) continue;
            out.push_back({name, gname, disparity_ratio(major, rows[first + k].ate.mean)});
        }
    };

    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t k = 0; k < group_names.size(); ++k)
            res.ate.push_back({grid[i].name(), group_names[k], summarize(per_rep[i][k]), per_rep[i][k]});
        if (i != baseline) add_disparity(res.disparity, grid[i].name(), res.ate);
    }

    std::vector<std::string> components;
    for (const auto& m : grid)
        if (!m.is_baseline())
            for (const auto& c : components_of(m))
                if (std::find(components.begin(), components.end(), c) == components.end()) components.push_back(c);
    const auto reps = res.repetitions.size();
    for (const auto& comp : components) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto cs = components_of(grid[i]);
            if (!grid[i].is_baseline() && std::find(cs.begin(), cs.end(), comp) != cs.end()) members.push_back(i);
        }
        for (std::size_t k = 0; k < group_names.size(); ++k) {
            std::vector<double> v(reps, 0.0);
            for (std::size_t r = 0; r < reps; ++r) {
                for (auto i : members) v[r] += per_rep[i][k][r];
                v[r] /= static_cast<double>(members.size());
            }
            res.component_ate.push_back({comp, group_names[k], summarize(v), v});
        }
        add_disparity(res.component_disparity, comp, res.component_ate);
    }
}

const AteRow& ExperimentResult::find(const std::string& mitigation, const std::string& group, bool component) const {
    for (const auto& row : component ? component_ate : ate)
        if (row.mitigation == mitigation && row.group == group) return row;
    throw Error("no ATE for " + mitigation + " / " + group);
}

double ExperimentResult::find_disparity(const std::string& mitigation, bool component) const {
    for (const auto& row : component ? component_disparity : disparity)
        if (row.mitigation == mitigation && row.minority == "minority") return row.ratio;
    throw Error("no disparity ratio for " + mitigation);
}

void write_results(const ExperimentResult& res, const std::filesystem::path& dir) {
    const auto& cfg = res.config;
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "effective_config.json") << to_json(cfg).dump(2) << '\n';

    {
        auto out = csv::open_out(dir / "ate.csv");
        out << "mitigation,claim_strategy,label_strategy,workflow,group,ate,se,repetitions\n";
        for (const auto& row : res.ate) {
            const auto& m = *std::find_if(cfg.grid.begin(), cfg.grid.end(), [&](const MitigationConfig& x) { return x.name() == row.mitigation; });
            const bool base = m.is_baseline();
            out << row.mitigation << ',' << (base ? "" : to_string(m.claim_strategy)) << ',' << (base ? "" : to_string(m.label_strategy))
                << ',' << to_string(m.workflow) << ',' << row.group << ',' << csv::fmt(row.ate.mean) << ',' << csv::fmt(row.ate.se) << ','
                << row.per_repetition.size() << '\n';
        }
    }
    {
        auto out = csv::open_out(dir / "ate_components.csv");
        out << "component,group,ate,se,repetitions\n";
        for (const auto& row : res.component_ate)
            out << row.mitigation << ',' << row.group << ',' << csv::fmt(row.ate.mean) << ',' << csv::fmt(row.ate.se) << ','
                << row.per_repetition.size() << '\n';
    }
    {
        auto out = csv::open_out(dir / "ate_by_repetition.csv");
        out << "repetition,mitigation,group,ate\n";
        for (const auto& row : res.ate)
            for (std::size_t r = 0; r < row.per_repetition.size(); ++r)
                out << res.repetitions[r].repetition << ',' << row.mitigation << ',' << row.group << ',' << csv::fmt(row.per_repetition[r]) << '\n';
    }
    {
        auto out = csv::open_out(dir / "disparity.csv");
        out << "kind,name,minority,ratio\n";
        for (const auto& row : res.disparity) out << "mitigation," << row.mitigation << ',' << row.minority << ',' << csv::fmt(row.ratio) << '\n';
        for (const auto& row : res.component_disparity)
            out << "component," << row.mitigation << ',' << row.minority << ',' << csv::fmt(row.ratio) << '\n';
    }
    {
        auto out = csv::open_out(dir / "iwcib.csv");
        out << "repetition,mitigation,node,community,iwcib\n";
        for (const auto& rep : res.repetitions)
            for (const auto& run : rep.runs)
                for (Eigen::Index j = 0; j < run.iwcib.size(); ++j)
                    out << rep.repetition << ',' << cfg.grid[run.mitigation].name() << ',' << j << ',' << rep.graph->community(static_cast<NodeId>(j))
                        << ',' << csv::fmt(run.iwcib[j]) << '\n';
    }
    {
        auto out = csv::open_out(dir / "pre_period_hashes.csv");
        out << "repetition,mitigation,hash,matches_baseline,removal_violations\n";
        for (const auto& rep : res.repetitions) {
            const auto base = std::find_if(rep.runs.begin(), rep.runs.end(), [&](const RunSummary& s) { return cfg.grid[s.mitigation].is_baseline(); });
            for (const auto& run : rep.runs) {
                std::ostringstream h;
                h << std::hex << std::setw(16) << std::setfill('0') << run.pre_period_hash;
                out << rep.repetition << ',' << cfg.grid[run.mitigation].name() << ',' << h.str() << ','
                    << (run.pre_period_hash == base->pre_period_hash ? 1 : 0) << ',' << run.removal_violations << '\n';
            }
        }
    }
    {
        auto out = csv::open_out(dir / "factchecks.csv");
        out << "repetition,mitigation,t,claim_id,score,veracity,blocked\n";
        for (const auto& rep : res.repetitions)
            for (const auto& run : rep.runs)
                for (const auto& f : run.fact_checks)
                    out << rep.repetition << ',' << cfg.grid[run.mitigation].name() << ',' << f.t << ',' << f.claim << ',' << csv::fmt(f.score) << ','
                        << int(f.veracity) << ',' << (f.blocked ? 1 : 0) << '\n';
    }
    {
        auto out = csv::open_out(dir / "misinfo_read.csv");
        out << "repetition,mitigation,community,topic,t,reads_per_node\n";
        for (const auto& rep : res.repetitions)
            for (const auto& run : rep.runs) {
                const auto& series = run.misinfo_reads;
                if (series.empty()) continue;
                for (Eigen::Index c = 0; c < series.front().rows(); ++c) {
                    const double size = static_cast<double>(rep.graph->members(static_cast<CommunityId>(c)).size());
                    for (Eigen::Index k = 0; k < series.front().cols(); ++k) {
                        double cum = 0.0;
                        for (std::size_t t = 0; t < series.size(); ++t) {
                            cum += series[t](c, k);
                            out << rep.repetition << ',' << cfg.grid[run.mitigation].name() << ',' << c << ',' << k << ',' << t << ','
                                << csv::fmt(cum / size) << '\n';
                        }
                    }
                }
            }
        auto totals = csv::open_out(dir / "misinfo_read_totals.csv");
        totals << "repetition,mitigation,post_period_reads\n";
        for (const auto& rep : res.repetitions)
            for (const auto& run : rep.runs) totals << rep.repetition << ',' << cfg.grid[run.mitigation].name() << ',' << run.misinfo_reads_post << '\n';
    }
    {
        auto out = csv::open_out(dir / "cascades.csv");
        out << "repetition,root,claim_id,topic,veracity,depth,max_breadth,size,unique_readers,structural_virality\n";
        for (const auto& rep : res.repetitions)
            for (const auto& s : rep.cascades)
                out << rep.repetition << ',' << s.root << ',' << s.claim << ',' << rep.claims[s.claim].topic << ',' << int(s.veracity) << ','
                    << s.depth << ',' << s.max_breadth << ',' << s.size << ',' << s.unique_readers << ',' << csv::fmt(s.structural_virality) << '\n';
        auto claims = csv::open_out(dir / "claims.csv");
        claims << "repetition,claim_id,topic,veracity,virality,cascades,utterances\n";
        for (const auto& rep : res.repetitions)
            for (std::size_t c = 0; c < rep.claims.size(); ++c)
                claims << rep.repetition << ',' << c << ',' << rep.claims[c].topic << ',' << int(rep.claims[c].veracity) << ','
                       << csv::fmt(rep.claims[c].virality) << ',' << rep.cascades_per_claim[c] << ',' << rep.utterances_per_claim[c] << '\n';
    }

    // CCDFs pooled over repetitions, one file per statistic.
    using Getter = double (*)(const CascadeStats&);
    const std::vector<std::pair<std::string, Getter>> cascade_metrics{
        {"depth", [](const CascadeStats& s) { return double(s.depth); }},
        {"max_breadth", [](const CascadeStats& s) { return double(s.max_breadth); }},
        {"size", [](const CascadeStats& s) { return double(s.size); }},
        {"unique_readers", [](const CascadeStats& s) { return double(s.unique_readers); }},
        {"structural_virality", [](const CascadeStats& s) { return s.structural_virality; }},
    };
    auto write_ccdf = [&](const std::string& name, const std::map<int, std::vector<double>>& by_veracity) {
        auto out = csv::open_out(dir / ("ccdf_" + name + ".csv"));
        out << "veracity,x,ccdf\n";
        for (const auto& [v, values] : by_veracity) {
            if (values.empty()) continue;
            for (const auto& [x, p] : ccdf(values)) out << v << ',' << csv::fmt(x) << ',' << csv::fmt(p) << '\n';
        }
    };
    for (const auto& [name, get] : cascade_metrics) {
        std::map<int, std::vector<double>> by;
        for (const auto& rep : res.repetitions)
            for (const auto& s : rep.cascades) by[s.veracity].push_back(get(s));
        write_ccdf(name, by);
    }
    std::map<int, std::vector<double>> utt, casc;
    for (const auto& rep : res.repetitions)
        for (std::size_t c = 0; c < rep.claims.size(); ++c) {
            if (rep.utterances_per_claim[c] == 0) continue;
            utt[rep.claims[c].veracity].push_back(static_cast<double>(rep.utterances_per_claim[c]));
            casc[rep.claims[c].veracity].push_back(static_cast<double>(rep.cascades_per_claim[c]));
        }
    write_ccdf("utterances_per_claim", utt);
    write_ccdf("cascades_per_claim", casc);

    for (const auto& rep : res.repetitions) write_id_map(*rep.graph, dir / "graphs" / ("rep" + std::to_string(rep.repetition) + "_id_map.csv"));
    if (!res.failures.empty()) {
        auto out = csv::open_out(dir / "failures.txt");
        for (const auto& f : res.failures) out << f << '\n';
    }
}

CascadeCheck check_cascades(const std::vector<CascadeStats>& cascades, const std::vector<std::int64_t>& per_claim,
                            const std::vector<std::int64_t>& utterances, const std::vector<ClaimInfo>& claims) {
    CascadeCheck c;
    double n_mis = 0, n_anti = 0;
    for (const auto& s : cascades) {
        if (s.veracity == 1) {
            c.mean_depth_misinfo += s.depth;
            c.mean_breadth_misinfo += s.max_breadth;
            c.mean_readers_misinfo += s.unique_readers;
            ++n_mis;
        } else if (s.veracity == -1) {
            c.mean_depth_anti += s.depth;
            c.mean_breadth_anti += s.max_breadth;
            c.mean_readers_anti += s.unique_readers;
            ++n_anti;
        }
    }
    if (n_mis > 0) {
        c.mean_depth_misinfo /= n_mis;
        c.mean_breadth_misinfo /= n_mis;
        c.mean_readers_misinfo /= n_mis;
    }
    if (n_anti > 0) {
        c.mean_depth_anti /= n_anti;
        c.mean_breadth_anti /= n_anti;
        c.mean_readers_anti /= n_anti;
    }
    for (std::size_t k = 0; k < claims.size(); ++k) {
        if (claims[k].veracity == 1) c.max_cascades_per_claim_misinfo = std::max(c.max_cascades_per_claim_misinfo, per_claim[k]);
        if (claims[k].veracity == -1) c.max_cascades_per_claim_anti = std::max(c.max_cascades_per_claim_anti, per_claim[k]);
        if (claims[k].veracity == 1) c.max_utterances_per_claim_misinfo = std::max(c.max_utterances_per_claim_misinfo, utterances[k]);
        if (claims[k].veracity == -1) c.max_utterances_per_claim_anti = std::max(c.max_utterances_per_claim_anti, utterances[k]);
    }
    return c;
}

std::vector<CascadeCheck> validate_cascades(const ExperimentConfig& cfg, int seeds) {
    cfg.scenario.validate();
    const Graph base = build_base_graph(cfg);
    std::vector<CascadeCheck> out(static_cast<std::size_t>(seeds));
    parallel_for(out.size(), cfg.threads, [&](std::size_t r) {
        const auto seed = repetition_seed(cfg.master_seed, static_cast<int>(r));
        auto g = repetition_graph(cfg, base, seed);
        WorldState w = init_world(g, cfg.scenario, derive_seed(seed, {kWorldKey}));
        run(w, cfg.T);
        out[r] = check_cascades(cascade_stats(w.log), cascades_per_claim(w.log), utterances_per_claim(w.log), w.log.claims);
        out[r].seed = seed;
    });
    return out;
}

}  // namespace tacit
