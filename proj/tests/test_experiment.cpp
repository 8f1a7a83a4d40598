#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lonkit/experiment.hpp"

using namespace lonkit;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("lonkit_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

ExperimentPlan small_plan(const fs::path& out) {
    ExperimentPlan plan;
    plan.n = 8;
    plan.k_list = {2, 5};
    plan.seeds_per_k = 7;
    plan.restarts = 15;
    plan.master_seed = 11;
    plan.out_dir = out.string();
    return plan;
}

int cli(const std::string& args) {
    const std::string cmd = std::string(LONKIT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("plans round-trip and validate") {
    ExperimentPlan plan;
    plan.n = 12;
    plan.k_list = {1, 3, 11};
    plan.seeds_per_k = 4;
    plan.first_seed = 9;
    plan.fe_max = 77;
    plan.restarts = 5;
    plan.master_seed = 3;
    plan.out_dir = "somewhere";
    plan.workers = 2;
    plan.path_length = false;
    std::stringstream ss;
    write_plan(plan, ss);
    const auto back = read_plan(ss);
    CHECK(back.n == 12);
    CHECK(back.k_list == plan.k_list);
    CHECK(back.seeds_per_k == 4);
    CHECK(back.first_seed == 9);
    CHECK(back.fe_max == 77);
    CHECK(back.restarts == 5);
    CHECK(back.master_seed == 3);
    CHECK(back.out_dir == "somewhere");
    CHECK(back.workers == 2);
    CHECK_FALSE(back.path_length);
    CHECK(back.instances().size() == 12);
    CHECK(back.instances().front() == InstanceId{12, 1, 9});

    ExperimentPlan defaults;
    CHECK(defaults.effective_fe_max() == 52428);

    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_plan(in);
    };
    CHECK(parse("# comment\nn = 10  # trailing\nk_list = 0, 9\nout = x\n").k_list == std::vector<int>{0, 9});
    CHECK_THROWS_AS(parse("n = 10\nk_list = 10\n"), ParameterError);
    CHECK_THROWS_AS(parse("n = 10\nk_list = 2,2\n"), ParameterError);
    try {
        parse("n = 10\nbogus = 1\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    try {
        parse("n = 10\nseeds_per_k = -3\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse("n 10\n"), ParseError);
}

TEST_CASE("instance keys change with every input") {
    ExperimentPlan plan;
    const InstanceId id{18, 4, 2};
    const auto base = instance_key(plan, id);
    CHECK(base == instance_key(plan, id));
    CHECK(base != instance_key(plan, {18, 4, 3}));
    CHECK(base != instance_key(plan, {18, 5, 2}));
    auto p2 = plan;
    p2.restarts = 499;
    CHECK(base != instance_key(p2, id));
    auto p3 = plan;
    p3.master_seed = 1;
    CHECK(base != instance_key(p3, id));
    auto p4 = plan;
    p4.d = 3;
    CHECK(base != instance_key(p4, id));
    auto p5 = plan;
    p5.workers = 8;
    CHECK(base == instance_key(p5, id));
    CHECK(instance_master_seed(0, id) != instance_master_seed(0, {18, 4, 3}));
}

TEST_CASE("a k=0 sweep has one optimum and always succeeds") {
    const auto dir = scratch("k0");
    ExperimentPlan plan;
    plan.n = 10;
    plan.k_list = {0};
    plan.seeds_per_k = 1;
    plan.restarts = 10;
    plan.out_dir = dir.string();
    std::ostringstream log;
    const auto s = run_sweep(plan, log);
    CHECK(s.computed == 1);
    CHECK(s.failures.empty());
    const auto rows = lines_of(dir / "metrics.csv");
    REQUIRE(rows.size() == 3);
    const auto header = metrics_header();
    std::vector<std::string> cells;
    {
        std::istringstream ss(rows[2]);
        for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    }
    REQUIRE(cells.size() == header.size());
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "nv") CHECK(cells[i] == "1");
        if (header[i] == "ps") CHECK(cells[i] == "1");
    }
    CHECK(lines_of(dir / "runs.csv").size() == 2 + 10);
}

TEST_CASE("sweeps resume and do not depend on the worker count") {
    const auto a = scratch("sweep_a");
    const auto b = scratch("sweep_b");
    auto plan = small_plan(a);
    std::ostringstream log;
    const auto first = run_sweep(plan, log);
    CHECK(first.computed == 14);
    const auto metrics = slurp(a / "metrics.csv");
    const auto runs = slurp(a / "runs.csv");
    const auto lon = slurp(a / "lon" / "n8_k5_s3.lon");

    const auto again = run_sweep(plan, log);
    CHECK(again.computed == 0);
    CHECK(again.skipped == 14);
    CHECK(slurp(a / "metrics.csv") == metrics);
    CHECK(slurp(a / "runs.csv") == runs);

    // A missing per-instance file is recomputed to the same bytes.
    fs::remove(a / "instances" / "n8_k2_s4.runs.csv");
    const auto healed = run_sweep(plan, log);
    CHECK(healed.computed == 1);
    CHECK(slurp(a / "runs.csv") == runs);

    auto parallel = small_plan(b);
    parallel.workers = 3;
    run_sweep(parallel, log);
    CHECK(slurp(b / "metrics.csv") == metrics);
    CHECK(slurp(b / "runs.csv") == runs);
    CHECK(slurp(b / "lon" / "n8_k5_s3.lon") == lon);
    CHECK(lines_of(a / "runs.csv").size() == 2 + 14 * 15);
}

TEST_CASE("reports regenerate identically and reject orphans") {
    const auto dir = scratch("report");
    auto plan = small_plan(dir / "sweep");
    plan.n = 10;
    plan.k_list = {3, 6};
    plan.seeds_per_k = 12;
    std::ostringstream log;
    run_sweep(plan, log);
    const auto m = (dir / "sweep" / "metrics.csv").string();
    const auto r = (dir / "sweep" / "runs.csv").string();
    const auto rows = load_report_rows(m, r);
    REQUIRE(rows.size() == 24);
    for (const auto& row : rows) CHECK(row.stats.n_runs == 15);

    const auto summary = write_report(rows, (dir / "r1").string(), "test");
    write_report(load_report_rows(m, r), (dir / "r2").string(), "test");
    for (const char* f : {"table1.txt", "spearman_ets.csv", "correlations.csv", "regression_full.txt",
                          "regression_final.txt", "residuals.csv", "qq.csv", "partial_residuals.csv"}) {
        CHECK(fs::exists(dir / "r1" / f));
        CHECK(slurp(dir / "r1" / f) == slurp(dir / "r2" / f));
    }
    CHECK(slurp(dir / "r1" / "regression_full.txt").find("log(ets)") != std::string::npos);
    REQUIRE(summary.final_terms);
    {
        for (const auto& t : *summary.final_terms) {
            CHECK(slurp(dir / "r1" / "regression_final.txt").find(t) != std::string::npos);
        }
    }

    // Drop every run of one instance.
    auto kept = lines_of(r);
    std::erase_if(kept, [](const std::string& l) { return l.rfind("10,6,2,", 0) == 0; });
    const auto orphan_runs = dir / "orphan_runs.csv";
    {
        std::ofstream out(orphan_runs);
        for (const auto& l : kept) out << l << '\n';
    }
    try {
        load_report_rows(m, orphan_runs.string());
        FAIL("expected an orphan error");
    } catch (const OrphanError& e) {
        REQUIRE(e.orphans.size() == 1);
        CHECK(e.orphans[0].find("n10_k6_s2") != std::string::npos);
    }
}

TEST_CASE("a single-k report has no k term and small samples fail softly") {
    const auto dir = scratch("single_k");
    auto plan = small_plan(dir / "sweep");
    plan.k_list = {3};
    plan.seeds_per_k = 5;
    std::ostringstream log;
    run_sweep(plan, log);
    const auto rows =
        load_report_rows((dir / "sweep" / "metrics.csv").string(), (dir / "sweep" / "runs.csv").string());
    const auto summary = write_report(rows, (dir / "r").string(), "test");
    CHECK_FALSE(summary.final_terms);
    CHECK(slurp(dir / "r" / "regression_full.txt").find("regression failed") != std::string::npos);

    plan.n = 10;
    plan.seeds_per_k = 20;
    run_sweep(plan, log);
    write_report(load_report_rows((dir / "sweep" / "metrics.csv").string(), (dir / "sweep" / "runs.csv").string()),
                 (dir / "r").string(), "test");
    const auto full = slurp(dir / "r" / "regression_full.txt");
    CHECK(full.find("regression failed") == std::string::npos);
    CHECK(full.find("~ k") == std::string::npos);
    CHECK(full.find("+ k +") == std::string::npos);
}

TEST_CASE("command line exit codes") {
    const auto dir = scratch("cli");
    const auto d = dir.string();
    CHECK(cli("--help") == 0);
    CHECK(cli("generate --n 8 --k 2 --seed 1 --out " + d + "/i.nk") == 0);
    CHECK(fs::exists(dir / "i.nk"));
    CHECK(cli("extract --n 8 --k 2 --seed 1 --out " + d + "/a.lon --dot " + d + "/a.dot") == 0);
    CHECK(cli("metrics --lon " + d + "/a.lon --out " + d + "/m.csv") == 0);
    CHECK(lines_of(dir / "m.csv").size() == 2);
    CHECK(cli("partition --n 8 --k 2 --seed 1 --out " + d + "/part") == 0);
    CHECK(fs::exists(dir / "part" / "optima.csv"));
    CHECK(cli("ils --n 8 --k 2 --seed 1 --restarts 5 --out " + d + "/runs.csv") == 0);
    CHECK(fs::exists(dir / "runs.csv.manifest"));

    CHECK(cli("") == 1);
    CHECK(cli("generate --n 8 --k 9 --seed 1") == 1);
    CHECK(cli("generate --n nine") == 1);
    CHECK(cli("metrics") == 1);
    CHECK(cli("sweep --plan " + d + "/missing.plan") == 1);
    {
        std::ofstream bad(dir / "bad.lon");
        bad << "not a lon file\n";
    }
    CHECK(cli("metrics --lon " + d + "/bad.lon") == 1);
    CHECK(cli("generate --n 8 --k 2 --seed 1 --out /proc/lonkit/x.nk") == 3);

    {
        std::ofstream plan(dir / "p.plan");
        plan << "n = 7\nk_list = 1, 4\nseeds_per_k = 6\nrestarts = 8\nout = " << d << "/sweep\n";
    }
    CHECK(cli("sweep --plan " + d + "/p.plan") == 0);
    CHECK(cli("report --metrics " + d + "/sweep/metrics.csv --runs " + d + "/sweep/runs.csv --out " + d +
              "/report") == 0);
    CHECK(fs::exists(dir / "report" / "table1.txt"));
}
