/// @file cli.hpp
/// @brief Driver logic behind the command-line tool: configuration, the
///        solve pipeline with its reports, and the kernel benchmark harness.

#ifndef MATCHAMG_CLI_HPP
#define MATCHAMG_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

#include "matchamg/coarsening.hpp"
#include "matchamg/krylov.hpp"
#include "matchamg/multigrid.hpp"

namespace matchamg::cli {

// Exit codes of the tool.
inline constexpr int kExitConverged = 0;
inline constexpr int kExitNotConverged = 2;
inline constexpr int kExitBreakdown = 3;
inline constexpr int kExitBadInput = 4;

enum class OutputFormat { Table, Csv, Json };

struct RunConfig {
    std::string matrix_path; ///< MatrixMarket file, or
    std::string gen_spec;    ///< generator spec "ani:..."/"poisson2d:..."/"randk3d:..."

    CycleType cycle = CycleType::V;
    int pre_sweeps = 1;
    int post_sweeps = 1;
    int coarsest_sweeps = 20;

    double rtol = 1e-6;
    index_t itmax = 5000;

    int max_levels = 40;
    double coarse_factor = 40.0;
    AggregationMode aggregation = AggregationMode::DoublePairwise;

    std::string wvec = "ones"; ///< "ones" or a path to a plain-text vector
    OutputFormat out = OutputFormat::Table;
    std::string save_path;     ///< optional: also write the report here

    int threads = 0; ///< 0 = hardware concurrency
    std::uint64_t seed = 0;

    int bench_reps = 11; ///< median-of-k repetitions in `bench`
};

/// Parses "ani:NX,NY,EPS,THETA", "poisson2d:NX,NY" or
/// "randk3d:NX,NY,NZ,SIGMA"; throws std::invalid_argument on bad specs.
CsrMatrix matrix_from_gen_spec(const std::string& spec, std::uint64_t seed);

/// Full pipeline: load/generate, setup, solve, report. Returns an exit code.
int run_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Kernel benchmark: lane-group SpMV sweep vs. the row-serial baseline and
/// fused vs. unfused PCG reductions, CSV output with median-of-k timings.
int run_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err);

} // namespace matchamg::cli

#endif
