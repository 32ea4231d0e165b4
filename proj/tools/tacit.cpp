// tacit: run counterfactual fact-checking experiments.
#include <chrono>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "tacit/csv.hpp"
#include "tacit/experiment.hpp"
#include "tacit/logio.hpp"

namespace {

using namespace tacit;

int cmd_run(const std::string& config, const std::string& out, std::optional<std::uint64_t> seed, std::optional<int> reps,
            std::optional<int> threads, bool export_logs) {
    auto cfg = load_experiment(config);
    if (seed) cfg.master_seed = *seed;
    if (reps) cfg.repetitions = *reps;
    if (threads) cfg.threads = *threads;
    if (export_logs) cfg.export_logs = true;
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const auto res = run_experiment(cfg, out);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::printf("%-52s %10s %10s %10s\n", "mitigation", "network", "majority", "minority");
    const auto major = "community_" + std::to_string(res.majority);
    for (const auto& m : cfg.grid) {
        if (m.is_baseline()) continue;
        std::printf("%-52s %10.5f %10.5f %10.5f\n", m.name().c_str(), res.find(m.name(), "network").ate.mean,
                    res.find(m.name(), major).ate.mean, res.find(m.name(), "minority").ate.mean);
    }
    std::printf("%zu repetitions in %.1f s, results in %s\n", res.repetitions.size(), secs, out.c_str());
    for (const auto& f : res.failures) std::fprintf(stderr, "failed: %s\n", f.c_str());
    return res.failures.empty() ? 0 : 1;
}

int cmd_validate(const std::string& config, int seeds, int min_pass, std::optional<std::uint64_t> seed) {
    auto cfg = load_experiment(config);
    if (seed) cfg.master_seed = *seed;
    const auto checks = validate_cascades(cfg, seeds);
    int passed = 0;
    std::printf("%-4s %-14s %-14s %-16s %-14s %-14s %s\n", "rep", "depth(+1/-1)", "breadth", "readers", "max casc/claim", "max utt/claim",
                "ok");
    for (std::size_t r = 0; r < checks.size(); ++r) {
        const auto& c = checks[r];
        passed += c.pass();
        std::printf("%-4zu %5.2f/%-8.2f %5.2f/%-8.2f %6.1f/%-9.1f %4lld/%-9lld %4lld/%-9lld %s\n", r, c.mean_depth_misinfo,
                    c.mean_depth_anti, c.mean_breadth_misinfo, c.mean_breadth_anti, c.mean_readers_misinfo, c.mean_readers_anti,
                    static_cast<long long>(c.max_cascades_per_claim_misinfo), static_cast<long long>(c.max_cascades_per_claim_anti),
                    static_cast<long long>(c.max_utterances_per_claim_misinfo), static_cast<long long>(c.max_utterances_per_claim_anti),
                    c.pass() ? "pass" : "FAIL");
    }
    std::printf("%d/%d seeds satisfy every ordering (need %d)\n", passed, seeds, min_pass);
    return passed >= min_pass ? 0 : 2;
}

int cmd_replay(const std::string& dir, const std::string& out) {
    const auto run = read_run_log(dir);
    if (run.log.belief_checkpoints.size() < 2) throw Error("replay needs at least two belief checkpoints");
    const auto& [t0, before] = *run.log.belief_checkpoints.begin();
    const auto& [t1, after] = *run.log.belief_checkpoints.rbegin();
    const auto values = iwcib(before, after, run.impactedness);
    const auto cascades = cascade_stats(run.log);
    const auto dest = out.empty() ? std::filesystem::path(dir) / "replay" : std::filesystem::path(out);
    {
        auto f = csv::open_out(dest / "iwcib.csv");
        f << "node,community,iwcib\n";
        for (Eigen::Index j = 0; j < values.size(); ++j) f << j << ',' << run.community[static_cast<std::size_t>(j)] << ',' << csv::fmt(values[j]) << '\n';
    }
    {
        auto f = csv::open_out(dest / "cascades.csv");
        f << "root,claim_id,veracity,depth,max_breadth,size,unique_readers,structural_virality\n";
        for (const auto& s : cascades)
            f << s.root << ',' << s.claim << ',' << int(s.veracity) << ',' << s.depth << ',' << s.max_breadth << ',' << s.size << ','
              << s.unique_readers << ',' << csv::fmt(s.structural_virality) << '\n';
    }
    const auto check = check_cascades(cascades, cascades_per_claim(run.log), utterances_per_claim(run.log), run.log.claims);
    std::printf("IWCiB over [%d, %d]: mean %.6g over %lld nodes\n", t0, t1, values.mean(), static_cast<long long>(values.size()));
    std::printf("%zu cascades; mean depth misinfo %.3f vs anti %.3f\n", cascades.size(), check.mean_depth_misinfo, check.mean_depth_anti);
    std::printf("written to %s\n", dest.string().c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Agent-based simulation of misinformation spread and fact-checking interventions"};
    app.require_subcommand(1);

    std::string config, out, log_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> reps, threads;
    bool export_logs = false;
    int seeds = 10, min_pass = 8;

    auto* run = app.add_subcommand("run", "run the counterfactual experiment grid");
    run->add_option("--config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out, "output directory")->required();
    run->add_option("--seed", seed, "override master_seed");
    run->add_option("--reps", reps, "override repetitions");
    run->add_option("--threads", threads, "override worker threads");
    run->add_flag("--export-logs", export_logs, "write per-run event logs under <out>/logs");

    auto* validate = app.add_subcommand("validate-cascades", "check veracity orderings of unmitigated cascades");
    validate->add_option("--config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    validate->add_option("--seeds", seeds, "number of seeded runs")->check(CLI::PositiveNumber);
    validate->add_option("--min-pass", min_pass, "runs that must satisfy every ordering");
    validate->add_option("--seed", seed, "override master_seed");

    auto* replay = app.add_subcommand("replay", "recompute metrics from an exported run log");
    replay->add_option("--log", log_dir, "run log directory")->required()->check(CLI::ExistingDirectory);
    replay->add_option("--out", out, "output directory (default <log>/replay)");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run) return cmd_run(config, out, seed, reps, threads, export_logs);
        if (*validate) return cmd_validate(config, seeds, min_pass, seed);
        if (*replay) return cmd_replay(log_dir, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
