// lonkit: local optima networks of NK landscapes and ILS performance.
//
// Exit codes: 0 success, 1 usage, 2 partial failure, 3 I/O.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "lonkit/basin_hc.hpp"
#include "lonkit/csv.hpp"
#include "lonkit/experiment.hpp"
#include "lonkit/ils.hpp"
#include "lonkit/lon.hpp"
#include "lonkit/lon_metrics.hpp"
#include "lonkit/nk_model.hpp"

namespace fs = std::filesystem;
using namespace lonkit;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitPartial = 2;
constexpr int kExitIo = 3;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ofstream open_out(const std::string& path) {
    if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path);
    return f;
}

// Writes through `fn` to a file, or to stdout for "-" / empty.
template <typename Fn>
void emit(const std::string& path, Fn&& fn) {
    if (path.empty() || path == "-") {
        fn(std::cout);
        return;
    }
    auto f = open_out(path);
    fn(f);
    if (!f) throw IoError("write failed: " + path);
}

struct InstanceArgs {
    int n = 18;
    int k = 2;
    std::uint64_t seed = 1;

    void attach(CLI::App* app) {
        app->add_option("--n", n, "number of loci")->capture_default_str();
        app->add_option("--k", k, "epistatic partners per locus")->capture_default_str();
        app->add_option("--seed", seed, "instance seed")->capture_default_str();
    }
    NkInstance make() const { return generate_instance(n, k, seed); }
};

std::vector<std::string> lon_metrics_header() {
    auto h = metrics_header();
    h.resize(21);  // up to valid_knn
    return h;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local optima networks of NK landscapes and Iterated Local Search performance"};
    app.require_subcommand(1);

    InstanceArgs inst_args;
    std::string out;
    int d = 2;
    std::uint64_t fe_max = 0;
    std::uint64_t restarts = 500;
    std::uint64_t master_seed = 0;
    unsigned workers = 1;

    auto* gen = app.add_subcommand("generate", "write an NK instance file");
    inst_args.attach(gen);
    gen->add_option("--out", out, "output file (default stdout)");

    auto* part = app.add_subcommand("partition", "exhaustive basin partition");
    inst_args.attach(part);
    part->add_option("--out", out, "output directory")->required();

    std::string dot;
    auto* ext = app.add_subcommand("extract", "extract the local optima network");
    inst_args.attach(ext);
    ext->add_option("--d", d, "escape distance")->capture_default_str();
    ext->add_option("--out", out, "LON file (default stdout)");
    ext->add_option("--dot", dot, "also write a Graphviz file");

    std::vector<std::string> lon_files;
    std::vector<std::uint64_t> seeds;
    bool no_lv = false;
    auto* met = app.add_subcommand("metrics", "network metrics of LON files or generated instances");
    met->add_option("--lon", lon_files, "LON files")->check(CLI::ExistingFile);
    met->add_option("--n", inst_args.n, "number of loci");
    met->add_option("--k", inst_args.k, "epistatic partners");
    met->add_option("--seeds", seeds, "instance seeds (generate instead of reading LON files)")->delimiter(',');
    met->add_option("--d", d, "escape distance")->capture_default_str();
    met->add_option("--workers", workers, "threads for all-pairs paths")->capture_default_str();
    met->add_flag("--no-lv", no_lv, "skip the all-pairs path length");
    met->add_option("--out", out, "metrics CSV (default stdout)");

    auto* ils = app.add_subcommand("ils", "Iterated Local Search restart experiment");
    inst_args.attach(ils);
    ils->add_option("--fe-max", fe_max, "evaluation budget (default floor(2^n/5))");
    ils->add_option("--restarts", restarts, "independent runs")->capture_default_str();
    ils->add_option("--master-seed", master_seed, "run seed stream")->capture_default_str();
    ils->add_option("--workers", workers, "threads")->capture_default_str();
    ils->add_option("--out", out, "runs CSV (a .manifest sidecar is written next to it)")->required();

    std::string plan_file;
    std::string out_override;
    unsigned workers_override = 0;
    auto* sweep = app.add_subcommand("sweep", "full pipeline over a plan of instances (resumable)");
    sweep->add_option("--plan", plan_file, "plan file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--out", out_override, "override the plan's output directory");
    sweep->add_option("--workers", workers_override, "override the plan's worker count");

    std::string metrics_csv, runs_csv;
    auto* rep = app.add_subcommand("report", "aggregate tables, correlations and regression from a sweep");
    rep->add_option("--metrics", metrics_csv, "metrics.csv from sweep")->required()->check(CLI::ExistingFile);
    rep->add_option("--runs", runs_csv, "runs.csv from sweep")->required()->check(CLI::ExistingFile);
    rep->add_option("--out", out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*gen) {
            const auto inst = inst_args.make();
            emit(out, [&](std::ostream& o) { write_instance(inst, o); });
        } else if (*part) {
            const auto inst = inst_args.make();
            const auto p = basin_partition(inst);
            emit((fs::path(out) / "assignment.csv").string(), [&](std::ostream& o) { write_assignment(p, o); });
            emit((fs::path(out) / "optima.csv").string(), [&](std::ostream& o) { write_optima(p, o); });
            std::cerr << inst.id().label() << ": " << p.size() << " local optima\n";
        } else if (*ext) {
            const auto inst = inst_args.make();
            const auto lon = extract_lon(inst, basin_partition(inst), d);
            emit(out, [&](std::ostream& o) { write_lon(lon, o); });
            if (!dot.empty()) emit(dot, [&](std::ostream& o) { write_dot(lon, o); });
        } else if (*met) {
            if (lon_files.empty() && seeds.empty()) {
                std::cerr << "metrics: give --lon files or --seeds\n";
                return kExitUsage;
            }
            MetricsOptions mopts;
            mopts.path_length = !no_lv;
            mopts.workers = workers;
            std::vector<LonMetricsRow> rows;
            for (const auto& file : lon_files) {
                std::ifstream in(file);
                if (!in) throw IoError("cannot read " + file);
                rows.push_back(metrics_row(read_lon(in), mopts));
            }
            for (auto s : seeds) {
                const auto inst = generate_instance(inst_args.n, inst_args.k, s);
                rows.push_back(metrics_row(extract_lon(inst, basin_partition(inst), d), mopts));
            }
            emit(out, [&](std::ostream& o) {
                csv::write_row(o, lon_metrics_header());
                for (const auto& r : rows) {
                    auto cells = metrics_cells(r, SuccessStats{});
                    cells.resize(21);
                    csv::write_row(o, cells);
                }
            });
        } else if (*ils) {
            const auto inst = inst_args.make();
            const auto table = fitness_table(inst);
            const auto p = basin_partition(inst, table);
            IlsConfig cfg;
            cfg.fe_max = fe_max ? fe_max : IlsConfig::default_fe_max(inst.n());
            cfg.restarts = restarts;
            cfg.master_seed = master_seed;
            const auto result = restart_experiment(FitnessSource(inst, table), global_optimum(p).fitness, cfg, workers);
            emit(out, [&](std::ostream& o) {
                o << "# manifest: " << fs::path(out).filename().string() << ".manifest\n";
                csv::write_row(o, runs_header());
                for (const auto& r : result.runs) csv::write_row(o, run_cells(inst.id(), r));
            });
            emit(out + ".manifest", [&](std::ostream& o) {
                o << "n = " << inst.n() << "\nk = " << inst.k() << "\nseed = " << inst.seed()
                  << "\nfe_max = " << cfg.fe_max << "\nrestarts = " << cfg.restarts
                  << "\nperturbation_bits = " << cfg.perturbation_bits << "\nmaster_seed = " << cfg.master_seed
                  << "\nsuccesses = " << result.stats.successes << "\n";
                if (result.stats.solved()) o << "ets = " << csv::format(lonkit::ets(result.stats)) << "\n";
            });
            std::cerr << inst.id().label() << ": ps=" << result.stats.ps << "\n";
        } else if (*sweep) {
            std::ifstream in(plan_file);
            if (!in) throw IoError("cannot read " + plan_file);
            auto plan = read_plan(in);
            if (!out_override.empty()) plan.out_dir = out_override;
            if (workers_override) plan.workers = workers_override;
            const auto summary = run_sweep(plan, std::cerr);
            std::cerr << "computed " << summary.computed << ", skipped " << summary.skipped << ", failed "
                      << summary.failures.size() << "\n";
            if (!summary.failures.empty()) return kExitPartial;
        } else if (*rep) {
            const auto rows = load_report_rows(metrics_csv, runs_csv);
            const auto summary =
                write_report(rows, out, "report from " + fs::path(metrics_csv).filename().string() + " and " +
                                            fs::path(runs_csv).filename().string());
            std::cerr << rows.size() << " instances, " << summary.excluded_unsolved << " unsolved\n";
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const OrphanError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPartial;
    }
    return 0;
}
