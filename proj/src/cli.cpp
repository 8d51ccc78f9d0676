#include "matchamg/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "json.hpp"

#include "matchamg/kernels.hpp"
#include "matchamg/matrix_market.hpp"
#include "matchamg/problems.hpp"
#include "matchamg/vector_ops.hpp"

namespace matchamg::cli {

namespace {

using clock_type = std::chrono::steady_clock;

double elapsed_ms(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0)
        .count();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, sep)) parts.push_back(item);
    return parts;
}

double parse_real(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size())
        throw std::invalid_argument("bad number `" + s + "`");
    return v;
}

index_t parse_count(const std::string& s) {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size() || v < 0)
        throw std::invalid_argument("bad count `" + s + "`");
    return static_cast<index_t>(v);
}

void set_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

std::vector<double> load_wvec(const std::string& spec, index_t n) {
    if (spec == "ones") return std::vector<double>(n, 1.0);
    std::ifstream in(spec);
    if (!in) throw std::runtime_error("cannot open smooth-vector file: " + spec);
    std::vector<double> w;
    double v;
    while (in >> v) w.push_back(v);
    if (static_cast<index_t>(w.size()) != n)
        throw std::runtime_error("smooth-vector file " + spec + " has " +
                                 std::to_string(w.size()) +
                                 " entries, matrix has " + std::to_string(n));
    return w;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<double> random_vector(index_t n, std::uint64_t seed, double lo,
                                  double hi) {
    std::vector<double> x(n);
    std::uint64_t state = seed;
    for (index_t i = 0; i < n; ++i) {
        const double u =
            static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
        x[i] = lo + (hi - lo) * u;
    }
    return x;
}

struct SolveRecord {
    std::string source;
    index_t n = 0;
    index_t nnz = 0;
    const RunConfig* cfg = nullptr;
    HierarchySummary summary;
    const SolveReport* report = nullptr;
};

const char* cycle_name(CycleType c) { return c == CycleType::V ? "v" : "w"; }
const char* agg_name(AggregationMode m) {
    return m == AggregationMode::DoublePairwise ? "double" : "pair";
}

/// RFC 4180 quoting for fields that may contain separators.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

void emit_table(const SolveRecord& rec, std::ostream& out) {
    out << "matrix: " << rec.source << "  n=" << rec.n << "  nnz=" << rec.nnz
        << "  cycle=" << cycle_name(rec.cfg->cycle)
        << "  agg=" << agg_name(rec.cfg->aggregation) << "\n";
    out << std::setw(12) << "tbuild" << std::setw(8) << "it" << std::setw(12)
        << "tsolve" << std::setw(13) << "relres" << std::setw(5) << "nl"
        << std::setw(9) << "Vcmplx" << std::setw(9) << "cratio" << "\n";
    std::ostringstream row;
    row << std::setw(12) << std::fixed << std::setprecision(2)
        << rec.report->setup_ms << std::setw(8) << rec.report->iterations
        << std::setw(12) << std::fixed << std::setprecision(2)
        << rec.report->solve_ms << std::setw(13) << std::scientific
        << std::setprecision(2) << rec.report->final_relres << std::setw(5)
        << rec.summary.nl << std::setw(9) << std::fixed << std::setprecision(2)
        << rec.summary.operator_complexity << std::setw(9)
        << rec.summary.coarsening_ratio;
    out << row.str() << "\n";
    out << (rec.report->converged ? "converged" : "NOT converged") << " in "
        << rec.report->iterations << " iterations\n";
}

void emit_csv(const SolveRecord& rec, std::ostream& out) {
    out << "source,n,nnz,cycle,pre,post,coarsest,agg,rtol,itmax,threads,seed,"
           "tbuild_ms,it,tsolve_ms,relres,converged,nl,vcmplx,cratio\n";
    out << csv_field(rec.source) << ',' << rec.n << ',' << rec.nnz << ','
        << cycle_name(rec.cfg->cycle) << ',' << rec.cfg->pre_sweeps << ','
        << rec.cfg->post_sweeps << ',' << rec.cfg->coarsest_sweeps << ','
        << agg_name(rec.cfg->aggregation) << ',' << rec.cfg->rtol << ','
        << rec.cfg->itmax << ',' << rec.cfg->threads << ',' << rec.cfg->seed
        << ',' << rec.report->setup_ms << ',' << rec.report->iterations << ','
        << rec.report->solve_ms << ',' << std::scientific
        << std::setprecision(16) << rec.report->final_relres
        << std::defaultfloat << std::setprecision(6) << ','
        << (rec.report->converged ? 1 : 0) << ',' << rec.summary.nl << ','
        << rec.summary.operator_complexity << ',' << rec.summary.coarsening_ratio
        << "\n";
}

void emit_json(const SolveRecord& rec, std::ostream& out) {
    nlohmann::json j;
    j["matrix"] = {{"source", rec.source}, {"n", rec.n}, {"nnz", rec.nnz}};
    j["config"] = {{"cycle", cycle_name(rec.cfg->cycle)},
                   {"pre_sweeps", rec.cfg->pre_sweeps},
                   {"post_sweeps", rec.cfg->post_sweeps},
                   {"coarsest_sweeps", rec.cfg->coarsest_sweeps},
                   {"agg", agg_name(rec.cfg->aggregation)},
                   {"rtol", rec.cfg->rtol},
                   {"itmax", rec.cfg->itmax},
                   {"max_levels", rec.cfg->max_levels},
                   {"coarse_factor", rec.cfg->coarse_factor},
                   {"wvec", rec.cfg->wvec},
                   {"matching_tie_break", "lower-vertex-index"},
                   {"threads", rec.cfg->threads},
                   {"seed", rec.cfg->seed}};
    j["setup"] = {{"tbuild_ms", rec.report->setup_ms},
                  {"nl", rec.summary.nl},
                  {"vcmplx", rec.summary.operator_complexity},
                  {"cratio", rec.summary.coarsening_ratio}};
    j["solve"] = {{"it", rec.report->iterations},
                  {"tsolve_ms", rec.report->solve_ms},
                  {"relres", rec.report->final_relres},
                  {"converged", rec.report->converged},
                  {"audit_checks", rec.report->audit_checks},
                  {"audit_failures", rec.report->audit_failures},
                  {"residual_history", rec.report->residual_history}};
    out << j.dump(2) << "\n";
}

void emit(const SolveRecord& rec, OutputFormat fmt, std::ostream& out) {
    switch (fmt) {
        case OutputFormat::Table: emit_table(rec, out); break;
        case OutputFormat::Csv: emit_csv(rec, out); break;
        case OutputFormat::Json: emit_json(rec, out); break;
    }
}

} // namespace

CsrMatrix matrix_from_gen_spec(const std::string& spec, std::uint64_t seed) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string args =
        colon == std::string::npos ? std::string{} : spec.substr(colon + 1);
    const std::vector<std::string> parts = split(args, ',');

    if (kind == "ani") {
        if (parts.size() != 4)
            throw std::invalid_argument(
                "gen spec `ani` wants ani:NX,NY,EPS,THETA");
        AniSpec s;
        s.nx = parse_count(parts[0]);
        s.ny = parse_count(parts[1]);
        s.epsilon = parse_real(parts[2]);
        s.theta = parse_real(parts[3]);
        return gen_anisotropic_2d(s);
    }
    if (kind == "poisson2d") {
        if (parts.size() != 2)
            throw std::invalid_argument("gen spec `poisson2d` wants poisson2d:NX,NY");
        return gen_poisson_2d(parse_count(parts[0]), parse_count(parts[1]));
    }
    if (kind == "randk3d") {
        if (parts.size() != 4)
            throw std::invalid_argument(
                "gen spec `randk3d` wants randk3d:NX,NY,NZ,SIGMA");
        RandPermSpec s;
        s.nx = parse_count(parts[0]);
        s.ny = parse_count(parts[1]);
        s.nz = parse_count(parts[2]);
        s.sigma = parse_real(parts[3]);
        s.seed = seed;
        return gen_poisson_3d_randk(s);
    }
    throw std::invalid_argument("unknown generator `" + kind +
                                "` (want ani, poisson2d or randk3d)");
}

int run_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    set_threads(cfg.threads);

    CsrMatrix A;
    std::string source;
    std::vector<double> w;
    try {
        if (!cfg.matrix_path.empty()) {
            A = read_matrix_market(cfg.matrix_path);
            source = cfg.matrix_path;
        } else if (!cfg.gen_spec.empty()) {
            A = matrix_from_gen_spec(cfg.gen_spec, cfg.seed);
            source = cfg.gen_spec;
        } else {
            err << "error: no matrix given (use --matrix or --gen)\n";
            return kExitBadInput;
        }
        w = load_wvec(cfg.wvec, A.nrows);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadInput;
    }

    Hierarchy h;
    HierarchySummary summary;
    double tbuild = 0.0;
    try {
        SetupConfig setup;
        setup.max_levels = cfg.max_levels;
        setup.coarse_factor = cfg.coarse_factor;
        setup.aggregation = cfg.aggregation;
        const auto t0 = clock_type::now();
        h = build_hierarchy(A, w, setup);
        tbuild = elapsed_ms(t0);
        summary = hierarchy_stats(h);
    } catch (const std::exception& e) {
        err << "setup error: " << e.what() << "\n";
        return kExitBadInput;
    }

    CycleConfig cycle;
    cycle.cycle = cfg.cycle;
    cycle.pre_sweeps = cfg.pre_sweeps;
    cycle.post_sweeps = cfg.post_sweeps;
    cycle.coarsest_sweeps = cfg.coarsest_sweeps;

    SolveConfig solve;
    solve.rtol = cfg.rtol;
    solve.itmax = cfg.itmax;

    const std::vector<double> b(A.nrows, 1.0); // unit right-hand side

    SolveReport report;
    std::vector<double> u;
    try {
        cycle.validate();
        solve.validate();
        MultigridPreconditioner precond(h, cycle);
        auto result = pcg_solve(
            A,
            [&precond](std::span<const double> r, std::span<double> z) {
                precond.apply(r, z);
            },
            b, solve);
        u = std::move(result.first);
        report = std::move(result.second);
    } catch (const BreakdownError& e) {
        err << "error: " << e.what() << "\n";
        return kExitBreakdown;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    report.setup_ms = tbuild;

    SolveRecord rec{source, A.nrows, A.nnz(), &cfg, summary, &report};
    emit(rec, cfg.out, out);
    if (!cfg.save_path.empty()) {
        std::ofstream f(cfg.save_path);
        if (!f) {
            err << "error: cannot write report to " << cfg.save_path << "\n";
            return kExitBadInput;
        }
        emit(rec, cfg.out, f);
    }
    return report.converged ? kExitConverged : kExitNotConverged;
}

namespace {

struct BenchRow {
    std::string object;
    std::string kernel;
    std::string variant;
    int group_size = 0;
    index_t n = 0;
    index_t nnz = 0;
    int reps = 0;
    double median_ms = 0.0;
    double check_rel_err = 0.0;
};

template <typename F>
double median_time_ms(int reps, F&& body) {
    std::vector<double> times(reps);
    for (int r = 0; r < reps; ++r) {
        const auto t0 = clock_type::now();
        body();
        times[r] = elapsed_ms(t0);
    }
    std::nth_element(times.begin(), times.begin() + reps / 2, times.end());
    return times[reps / 2];
}

double rel_inf_diff(std::span<const double> a, std::span<const double> b) {
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff = std::max(diff, std::abs(a[i] - b[i]));
        scale = std::max(scale, std::abs(b[i]));
    }
    return scale > 0.0 ? diff / scale : diff;
}

void emit_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
    out << "object,kernel,variant,group_size,n,nnz,reps,median_ms,check_rel_err\n";
    for (const BenchRow& r : rows)
        out << csv_field(r.object) << ',' << r.kernel << ',' << r.variant << ','
            << r.group_size << ',' << r.n << ',' << r.nnz << ',' << r.reps
            << ',' << std::defaultfloat << std::setprecision(6) << r.median_ms
            << ',' << std::scientific << std::setprecision(3)
            << r.check_rel_err << "\n";
}

} // namespace

int run_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    set_threads(cfg.threads);
    const int reps = std::max(1, cfg.bench_reps);

    CsrMatrix A;
    std::string source;
    try {
        if (!cfg.matrix_path.empty()) {
            A = read_matrix_market(cfg.matrix_path);
            source = cfg.matrix_path;
        } else {
            const std::string spec =
                cfg.gen_spec.empty() ? "poisson2d:256,256" : cfg.gen_spec;
            A = matrix_from_gen_spec(spec, cfg.seed);
            source = spec;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadInput;
    }

    std::vector<BenchRow> rows;
    const std::vector<double> x = random_vector(A.ncols, cfg.seed + 1, -1.0, 1.0);

    // row-serial baseline is the correctness reference for the policy sweep
    std::vector<double> y_ref;
    rows.push_back({source, "spmv", "row_serial", 0, A.nrows, A.nnz(), reps,
                    median_time_ms(reps, [&] { y_ref = spmv_row_serial(A, x); }),
                    0.0});

    for (int g : LaneGroupPolicy::kAdmissible) {
        std::vector<double> y;
        const double ms = median_time_ms(
            reps, [&] { y = spmv(A, x, LaneGroupPolicy::fixed(g)); });
        rows.push_back({source, "spmv", "lane_group", g, A.nrows, A.nnz(), reps,
                        ms, rel_inf_diff(y, y_ref)});
    }
    {
        const LaneGroupPolicy auto_policy = LaneGroupPolicy::for_matrix(A);
        std::vector<double> y;
        const double ms =
            median_time_ms(reps, [&] { y = spmv(A, x, auto_policy); });
        rows.push_back({source, "spmv", "auto", auto_policy.group_size, A.nrows,
                        A.nnz(), reps, ms, rel_inf_diff(y, y_ref)});
    }

    // prolongator workload: one pairwise step gives a 1-nnz-per-row matrix,
    // for which the policy rule selects a single lane
    try {
        const CoarseningStep step =
            pairwise_step(A, std::vector<double>(A.nrows, 1.0));
        const CsrMatrix& P = step.P;
        const std::vector<double> xc = random_vector(P.ncols, cfg.seed + 2, -1.0, 1.0);
        const LaneGroupPolicy auto_policy = LaneGroupPolicy::for_matrix(P);
        std::vector<double> y, yr;
        yr = spmv_row_serial(P, xc);
        const double ms =
            median_time_ms(reps, [&] { y = spmv(P, xc, auto_policy); });
        rows.push_back({"prolongator", "spmv", "auto", auto_policy.group_size,
                        P.nrows, P.nnz(), reps, ms, rel_inf_diff(y, yr)});
    } catch (const std::exception& e) {
        err << "warning: prolongator workload skipped: " << e.what() << "\n";
    }

    // fused vs unfused PCG reductions on 1e5-entry vectors
    {
        const index_t nv = 100000;
        const auto wv = random_vector(nv, cfg.seed + 3, 0.5, 1.5);
        const auto rv = random_vector(nv, cfg.seed + 4, 0.5, 1.5);
        const auto vv = random_vector(nv, cfg.seed + 5, 0.5, 1.5);
        const auto qv = random_vector(nv, cfg.seed + 6, 0.5, 1.5);

        TripleDot fused{};
        double s1 = 0, s2 = 0, s3 = 0;
        const double ms_f = median_time_ms(
            reps, [&] { fused = fused_triple_dot(wv, rv, vv, qv); });
        const double ms_u = median_time_ms(reps, [&] {
            s1 = dot(wv, rv);
            s2 = dot(wv, vv);
            s3 = dot(wv, qv);
        });
        const double check = std::max(
            {std::abs(fused.wr - s1) / std::abs(s1),
             std::abs(fused.wv - s2) / std::abs(s2),
             std::abs(fused.wq - s3) / std::abs(s3)});
        rows.push_back(
            {"vec100000", "triple_dot", "fused", 0, nv, 0, reps, ms_f, check});
        rows.push_back(
            {"vec100000", "triple_dot", "unfused", 0, nv, 0, reps, ms_u, check});

        auto y1f = wv, y2f = rv;
        auto y1u = wv, y2u = rv;
        const double ms_af = median_time_ms(
            reps, [&] { fused_axpy_pair(y1f, y2f, vv, 0.37, -0.21); });
        const double ms_au = median_time_ms(reps, [&] {
            axpy(y1u, 0.37, vv);
            axpy(y2u, -0.21, y1u);
        });
        const double check_axpy = std::max(rel_inf_diff(y1f, y1u),
                                           rel_inf_diff(y2f, y2u));
        rows.push_back({"vec100000", "axpy_pair", "fused", 0, nv, 0, reps,
                        ms_af, check_axpy});
        rows.push_back({"vec100000", "axpy_pair", "unfused", 0, nv, 0, reps,
                        ms_au, check_axpy});
    }

    emit_bench_csv(rows, out);
    if (!cfg.save_path.empty()) {
        std::ofstream f(cfg.save_path);
        if (!f) {
            err << "error: cannot write report to " << cfg.save_path << "\n";
            return kExitBadInput;
        }
        emit_bench_csv(rows, f);
    }
    return 0;
}

} // namespace matchamg::cli
