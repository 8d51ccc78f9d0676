#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "matchamg/cli.hpp"

int main(int argc, char** argv) {
    using namespace matchamg;

    CLI::App app{
        "matchamg: aggregation AMG preconditioner (matching-based coarsening) "
        "with a flexible CG solver"};
    app.require_subcommand(1);

    cli::RunConfig cfg;
    std::string cycle = "v";
    std::string agg = "double";
    std::string out = "table";

    auto add_common = [&](CLI::App* cmd) {
        auto* m = cmd->add_option("--matrix", cfg.matrix_path,
                                  "MatrixMarket coordinate file");
        auto* g = cmd->add_option(
            "--gen", cfg.gen_spec,
            "generated problem: ani:NX,NY,EPS,THETA | poisson2d:NX,NY | "
            "randk3d:NX,NY,NZ,SIGMA");
        m->excludes(g);
        cmd->add_option("--threads", cfg.threads,
                        "worker threads (0 = hardware)");
        cmd->add_option("--seed", cfg.seed, "seed for generated data");
        cmd->add_option("--save", cfg.save_path, "also write the report here");
    };

    CLI::App* solve =
        app.add_subcommand("solve", "setup the hierarchy and run PCG");
    add_common(solve);
    solve->add_option("--cycle", cycle, "multigrid cycle")
        ->check(CLI::IsMember({"v", "w"}));
    solve->add_option("--pre", cfg.pre_sweeps, "pre-smoothing sweeps");
    solve->add_option("--post", cfg.post_sweeps, "post-smoothing sweeps");
    solve->add_option("--coarsest-sweeps", cfg.coarsest_sweeps,
                      "smoother sweeps on the coarsest level");
    solve->add_option("--rtol", cfg.rtol, "relative residual tolerance");
    solve->add_option("--itmax", cfg.itmax, "iteration cap");
    solve->add_option("--max-levels", cfg.max_levels, "hierarchy level cap");
    solve->add_option("--coarse-factor", cfg.coarse_factor,
                      "coarsest size bound factor (bound = factor * n^(1/3))");
    solve->add_option("--agg", agg, "aggregation mode")
        ->check(CLI::IsMember({"pair", "double"}));
    solve->add_option("--wvec", cfg.wvec,
                      "smooth vector: `ones` or a plain-text file");
    solve->add_option("--out", out, "report format")
        ->check(CLI::IsMember({"table", "csv", "json"}));

    CLI::App* bench =
        app.add_subcommand("bench", "kernel benchmark harness (CSV output)");
    add_common(bench);
    bench->add_option("--reps", cfg.bench_reps, "repetitions per measurement");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kExitBadInput;
    }

    cfg.cycle = cycle == "w" ? CycleType::W : CycleType::V;
    cfg.aggregation = agg == "pair" ? AggregationMode::Pairwise
                                    : AggregationMode::DoublePairwise;
    cfg.out = out == "csv"    ? cli::OutputFormat::Csv
              : out == "json" ? cli::OutputFormat::Json
                              : cli::OutputFormat::Table;

    if (solve->parsed()) return cli::run_solve(cfg, std::cout, std::cerr);
    return cli::run_bench(cfg, std::cout, std::cerr);
}
