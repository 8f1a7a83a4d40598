#include "lonkit/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>

#include "lonkit/basin_hc.hpp"
#include "lonkit/csv.hpp"
#include "lonkit/parallel.hpp"
#include "lonkit/perf_stats.hpp"
#include "lonkit/regression.hpp"
#include "lonkit/rng.hpp"

namespace fs = std::filesystem;

namespace lonkit {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T plan_number(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(value, &used);
        if (used != value.size() || v < 0) throw std::invalid_argument(value);
        return static_cast<T>(v);
    } catch (const std::exception&) {
        throw ParameterError("plan key '" + key + "' needs a non-negative integer, got '" + value + "'");
    }
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

std::vector<InstanceId> ExperimentPlan::instances() const {
    std::vector<InstanceId> out;
    for (int k : k_list) {
        for (int s = 0; s < seeds_per_k; ++s) out.push_back({n, k, first_seed + static_cast<std::uint64_t>(s)});
    }
    return out;
}

void ExperimentPlan::validate() const {
    if (n < 1 || n > kMaxLoci) throw ParameterError("plan: n out of range");
    if (k_list.empty()) throw ParameterError("plan: k_list is empty");
    std::set<int> seen;
    for (int k : k_list) {
        if (k < 0 || k > n - 1) throw ParameterError("plan: k=" + std::to_string(k) + " out of range for n");
        if (!seen.insert(k).second) throw ParameterError("plan: duplicate k=" + std::to_string(k));
    }
    if (seeds_per_k < 1) throw ParameterError("plan: seeds_per_k must be positive");
    if (d < 1 || d > n) throw ParameterError("plan: d must lie in [1, n]");
    if (restarts < 1) throw ParameterError("plan: restarts must be positive");
    if (workers < 1) throw ParameterError("plan: workers must be positive");
    if (out_dir.empty()) throw ParameterError("plan: out must be set");
}

ExperimentPlan read_plan(std::istream& in) {
    ExperimentPlan plan;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", lineno);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "n") {
                plan.n = plan_number<int>(key, value);
            } else if (key == "k_list") {
                plan.k_list.clear();
                std::istringstream ss(value);
                std::string item;
                while (std::getline(ss, item, ',')) plan.k_list.push_back(plan_number<int>(key, trim(item)));
            } else if (key == "seeds_per_k") {
                plan.seeds_per_k = plan_number<int>(key, value);
            } else if (key == "first_seed") {
                plan.first_seed = plan_number<std::uint64_t>(key, value);
            } else if (key == "d") {
                plan.d = plan_number<int>(key, value);
            } else if (key == "fe_max") {
                plan.fe_max = plan_number<std::uint64_t>(key, value);
            } else if (key == "restarts") {
                plan.restarts = plan_number<std::uint64_t>(key, value);
            } else if (key == "master_seed") {
                plan.master_seed = plan_number<std::uint64_t>(key, value);
            } else if (key == "out") {
                plan.out_dir = value;
            } else if (key == "workers") {
                plan.workers = plan_number<unsigned>(key, value);
            } else if (key == "path_length") {
                if (value != "true" && value != "false") throw ParameterError("path_length must be true or false");
                plan.path_length = value == "true";
            } else {
                throw ParameterError("unknown plan key '" + key + "'");
            }
        } catch (const ParameterError& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    plan.validate();
    return plan;
}

void write_plan(const ExperimentPlan& plan, std::ostream& out) {
    out << "n = " << plan.n << "\nk_list = ";
    for (std::size_t i = 0; i < plan.k_list.size(); ++i) out << (i ? "," : "") << plan.k_list[i];
    out << "\nseeds_per_k = " << plan.seeds_per_k << "\nfirst_seed = " << plan.first_seed << "\nd = " << plan.d
        << "\nfe_max = " << plan.effective_fe_max() << "\nrestarts = " << plan.restarts
        << "\nmaster_seed = " << plan.master_seed << "\nout = " << plan.out_dir << "\nworkers = " << plan.workers
        << "\npath_length = " << (plan.path_length ? "true" : "false") << "\n";
}

std::uint64_t instance_master_seed(std::uint64_t plan_master, const InstanceId& id) {
    const std::uint64_t shape = (static_cast<std::uint64_t>(id.n) << 32) | static_cast<std::uint32_t>(id.k);
    return derive_seed(plan_master ^ splitmix64(shape), id.seed);
}

std::string instance_key(const ExperimentPlan& plan, const InstanceId& id) {
    std::ostringstream ss;
    ss << id.n << '/' << id.k << '/' << id.seed << '/' << plan.d << '/' << plan.effective_fe_max() << '/'
       << plan.restarts << '/' << plan.master_seed << '/' << plan.path_length;
    return hex(fnv1a(ss.str()));
}

InstanceOutcome run_instance(const InstanceId& id, int d, const IlsConfig& ils, const MetricsOptions& mopts,
                             unsigned ils_workers) {
    const auto inst = generate_instance(id.n, id.k, id.seed);
    const auto table = fitness_table(inst);
    const auto partition = basin_partition(inst, table);
    InstanceOutcome out;
    out.lon = extract_lon(inst, partition, d);
    out.metrics = metrics_row(out.lon, mopts);
    out.ils = restart_experiment(FitnessSource(inst, table), global_optimum(partition).fitness, ils, ils_workers);
    if (out.ils.stats.solved()) out.ets = ets(out.ils.stats);
    return out;
}

std::vector<std::string> metrics_header() {
    return {"n",        "k",        "seed",     "nv",       "lo",        "lv",         "fnn",
            "wii",      "cc",       "zout",     "y2",       "knn",       "lo_count",   "lv_count",
            "go_unreachable", "valid_lo", "valid_lv", "valid_fnn", "valid_cc", "valid_y2", "valid_knn",
            "fe_max",   "restarts", "successes", "ps",      "mean_ts",   "ets"};
}

std::vector<std::string> metrics_cells(const LonMetricsRow& row, const SuccessStats& stats) {
    auto flag = [](const std::optional<double>& v) { return std::string(v ? "1" : "0"); };
    std::optional<double> e;
    if (stats.solved()) e = ets(stats);
    return {std::to_string(row.id.n),
            std::to_string(row.id.k),
            std::to_string(row.id.seed),
            std::to_string(row.nv),
            csv::format(row.lo),
            csv::format(row.lv),
            csv::format(row.fnn),
            csv::format(row.wii),
            csv::format(row.cc),
            csv::format(row.zout),
            csv::format(row.y2),
            csv::format(row.knn),
            csv::format(row.lo_count),
            csv::format(row.lv_count),
            std::to_string(row.go_unreachable),
            flag(row.lo),
            flag(row.lv),
            flag(row.fnn),
            flag(row.cc),
            flag(row.y2),
            flag(row.knn),
            std::to_string(stats.fe_max),
            std::to_string(stats.n_runs),
            std::to_string(stats.successes),
            csv::format(stats.ps),
            csv::format(stats.mean_ts),
            csv::format(e)};
}

std::vector<std::string> runs_header() { return {"n", "k", "seed", "run_index", "success", "fe_used", "best_fitness"}; }

std::vector<std::string> run_cells(const InstanceId& id, const RunRecord& run) {
    return {std::to_string(id.n),      std::to_string(id.k),         std::to_string(id.seed),
            std::to_string(run.run_index), run.success ? "1" : "0", std::to_string(run.fe_used),
            csv::format(run.best_fitness)};
}

namespace {

std::string provenance_line(const ExperimentPlan& plan) {
    std::ostringstream ss;
    ss << "# manifest: manifest.txt; n=" << plan.n << "; k_list=";
    for (std::size_t i = 0; i < plan.k_list.size(); ++i) ss << (i ? "," : "") << plan.k_list[i];
    ss << "; seeds=" << plan.first_seed << ".." << plan.first_seed + static_cast<std::uint64_t>(plan.seeds_per_k) - 1
       << "; d=" << plan.d << "; fe_max=" << plan.effective_fe_max() << "; restarts=" << plan.restarts
       << "; master_seed=" << plan.master_seed;
    return ss.str();
}

std::map<std::string, std::string> completed_keys(const fs::path& manifest) {
    std::map<std::string, std::string> done;  // label -> key
    std::ifstream in(manifest);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string tag, label, key;
        if (ss >> tag >> label >> key && tag == "done") done[label] = key;
    }
    return done;
}

void copy_body(const fs::path& file, std::ostream& out, bool with_header) {
    std::ifstream in(file);
    if (!in) throw std::ios_base::failure("cannot read " + file.string());
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {
            first = false;
            if (!with_header) continue;
        }
        out << line << '\n';
    }
}

}  // namespace

SweepSummary run_sweep(const ExperimentPlan& plan, std::ostream& log) {
    plan.validate();
    const fs::path root(plan.out_dir);
    fs::create_directories(root / "lon");
    fs::create_directories(root / "instances");
    const fs::path manifest = root / "manifest.txt";
    if (!fs::exists(manifest)) {
        std::ofstream m(manifest);
        if (!m) throw std::ios_base::failure("cannot write " + manifest.string());
        m << "# lonkit sweep manifest\n";
        std::ostringstream plan_text;
        write_plan(plan, plan_text);
        std::istringstream lines(plan_text.str());
        for (std::string l; std::getline(lines, l);) m << "plan " << l << '\n';
    }

    const auto done = completed_keys(manifest);
    const auto ids = plan.instances();
    SweepSummary summary;
    std::mutex guard;  // manifest, log and summary
    IlsConfig base;
    base.fe_max = plan.effective_fe_max();
    base.restarts = plan.restarts;
    MetricsOptions mopts;
    mopts.path_length = plan.path_length;

    parallel_for(ids.size(), plan.workers, [&](std::size_t idx) {
        const auto& id = ids[idx];
        const std::string label = id.label();
        const std::string key = instance_key(plan, id);
        const fs::path metrics_file = root / "instances" / (label + ".metrics.csv");
        const fs::path runs_file = root / "instances" / (label + ".runs.csv");
        if (const auto it = done.find(label);
            it != done.end() && it->second == key && fs::exists(metrics_file) && fs::exists(runs_file)) {
            std::lock_guard lock(guard);
            ++summary.skipped;
            return;
        }
        try {
            IlsConfig cfg = base;
            cfg.master_seed = instance_master_seed(plan.master_seed, id);
            const auto outcome = run_instance(id, plan.d, cfg, mopts);
            {
                std::ofstream lf(root / "lon" / (label + ".lon"));
                write_lon(outcome.lon, lf);
                std::ofstream mf(metrics_file);
                csv::write_row(mf, metrics_header());
                csv::write_row(mf, metrics_cells(outcome.metrics, outcome.ils.stats));
                std::ofstream rf(runs_file);
                csv::write_row(rf, runs_header());
                for (const auto& run : outcome.ils.runs) csv::write_row(rf, run_cells(id, run));
                if (!lf || !mf || !rf) throw std::ios_base::failure("write failed for " + label);
            }
            std::lock_guard lock(guard);
            std::ofstream m(manifest, std::ios::app);
            m << "done " << label << ' ' << key << '\n';
            ++summary.computed;
            log << "done " << label << " nv=" << outcome.metrics.nv << " ps=" << outcome.ils.stats.ps << '\n';
        } catch (const std::exception& e) {
            std::lock_guard lock(guard);
            std::ofstream m(manifest, std::ios::app);
            m << "failed " << label << ' ' << key << ' ' << e.what() << '\n';
            summary.failures.push_back(label + ": " + e.what());
            log << "failed " << label << ": " << e.what() << '\n';
        }
    });

    // Assemble in plan order so outputs do not depend on scheduling.
    std::ofstream metrics(root / "metrics.csv");
    std::ofstream runs(root / "runs.csv");
    const auto prov = provenance_line(plan);
    metrics << prov << '\n';
    runs << prov << '\n';
    csv::write_row(metrics, metrics_header());
    csv::write_row(runs, runs_header());
    for (const auto& id : ids) {
        const std::string label = id.label();
        const fs::path mf = root / "instances" / (label + ".metrics.csv");
        const fs::path rf = root / "instances" / (label + ".runs.csv");
        if (!fs::exists(mf) || !fs::exists(rf)) continue;
        copy_body(mf, metrics, false);
        copy_body(rf, runs, false);
    }
    if (!metrics || !runs) throw std::ios_base::failure("cannot write sweep tables in " + root.string());
    std::sort(summary.failures.begin(), summary.failures.end());
    return summary;
}

OrphanError::OrphanError(std::vector<std::string> o)
    : std::runtime_error([&] {
          std::string msg = "instances present in only one input:";
          for (const auto& s : o) msg += " " + s;
          return msg;
      }()),
      orphans(std::move(o)) {}

std::vector<ReportRow> load_report_rows(const std::string& metrics_csv, const std::string& runs_csv) {
    const auto mt = csv::read_file(metrics_csv);
    const auto rt = csv::read_file(runs_csv);

    auto id_of = [](const csv::Table& t, const std::vector<std::string>& row) {
        return InstanceId{static_cast<int>(csv::parse_int(row[t.column("n")])),
                          static_cast<int>(csv::parse_int(row[t.column("k")])),
                          static_cast<std::uint64_t>(csv::parse_int(row[t.column("seed")]))};
    };

    std::map<InstanceId, std::pair<std::uint64_t, std::vector<std::uint64_t>>> runs;  // (count, successful fe)
    for (const auto& row : rt.rows) {
        auto& entry = runs[id_of(rt, row)];
        ++entry.first;
        if (row[rt.column("success")] == "1") {
            entry.second.push_back(static_cast<std::uint64_t>(csv::parse_int(row[rt.column("fe_used")])));
        }
    }

    std::vector<std::string> orphans;
    std::set<InstanceId> metric_ids;
    std::vector<ReportRow> out;
    for (const auto& row : mt.rows) {
        const auto id = id_of(mt, row);
        metric_ids.insert(id);
        const auto it = runs.find(id);
        if (it == runs.end()) {
            orphans.push_back(id.label() + " (no runs)");
            continue;
        }
        ReportRow r;
        r.metrics.id = id;
        r.metrics.nv = static_cast<std::size_t>(csv::parse_int(row[mt.column("nv")]));
        r.metrics.lo = csv::parse_optional(row[mt.column("lo")]);
        r.metrics.lv = csv::parse_optional(row[mt.column("lv")]);
        r.metrics.fnn = csv::parse_optional(row[mt.column("fnn")]);
        r.metrics.wii = csv::parse_double(row[mt.column("wii")]);
        r.metrics.cc = csv::parse_optional(row[mt.column("cc")]);
        r.metrics.zout = csv::parse_double(row[mt.column("zout")]);
        r.metrics.y2 = csv::parse_optional(row[mt.column("y2")]);
        r.metrics.knn = csv::parse_optional(row[mt.column("knn")]);
        r.metrics.lo_count = csv::parse_optional(row[mt.column("lo_count")]);
        r.metrics.lv_count = csv::parse_optional(row[mt.column("lv_count")]);
        r.metrics.go_unreachable = static_cast<std::size_t>(csv::parse_int(row[mt.column("go_unreachable")]));
        const auto fe_max = static_cast<std::uint64_t>(csv::parse_int(row[mt.column("fe_max")]));
        r.stats = summarize_runs(it->second.second, it->second.first, fe_max);
        if (r.stats.solved()) r.ets = ets(r.stats);
        out.push_back(std::move(r));
    }
    for (const auto& [id, _] : runs) {
        if (!metric_ids.count(id)) orphans.push_back(id.label() + " (no metrics)");
    }
    if (!orphans.empty()) throw OrphanError(orphans);
    std::sort(out.begin(), out.end(), [](const ReportRow& a, const ReportRow& b) { return a.metrics.id < b.metrics.id; });
    return out;
}

const std::vector<std::string>& metric_names() {
    static const std::vector<std::string> names{"k", "nv", "lo", "lv", "fnn", "wii", "cc", "zout", "y2", "knn", "ets"};
    return names;
}

double metric_value(const ReportRow& row, const std::string& name) {
    constexpr double na = std::numeric_limits<double>::quiet_NaN();
    const auto& m = row.metrics;
    auto opt = [&](const std::optional<double>& v) { return v ? *v : na; };
    if (name == "k") return m.id.k;
    if (name == "nv") return static_cast<double>(m.nv);
    if (name == "lo") return opt(m.lo);
    if (name == "lv") return opt(m.lv);
    if (name == "fnn") return opt(m.fnn);
    if (name == "wii") return m.wii;
    if (name == "cc") return opt(m.cc);
    if (name == "zout") return m.zout;
    if (name == "y2") return opt(m.y2);
    if (name == "knn") return opt(m.knn);
    if (name == "ets") return opt(row.ets);
    throw std::invalid_argument("unknown variable '" + name + "'");
}

namespace {

std::string cell(double v, const char* fmt = "%.3g") {
    char buf[48];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

void write_table1(const std::vector<ReportRow>& rows, std::ostream& out) {
    std::map<int, std::vector<const ReportRow*>> groups;
    for (const auto& r : rows) groups[r.metrics.id.k].push_back(&r);
    const std::vector<std::string> cols{"nv", "lo", "lv", "fnn", "wii", "cc", "zout", "y2", "knn", "ets"};
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-10s", "aggregate");
    out << buf;
    for (const auto& c : cols) {
        std::snprintf(buf, sizeof buf, " %22s", c == "ets" ? "ets(x1e4)" : c.c_str());
        out << buf;
    }
    out << '\n';
    for (const auto& [k, members] : groups) {
        std::snprintf(buf, sizeof buf, "%-10s", ("K=" + std::to_string(k)).c_str());
        out << buf;
        for (const auto& c : cols) {
            std::vector<double> v;
            for (const auto* r : members) {
                const double x = metric_value(*r, c);
                if (!std::isnan(x)) v.push_back(c == "ets" ? x / 1e4 : x);
            }
            std::string text = "NA";
            if (!v.empty()) {
                double mean = 0.0;
                for (double x : v) mean += x;
                mean /= static_cast<double>(v.size());
                double ss = 0.0;
                for (double x : v) ss += (x - mean) * (x - mean);
                const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
                text = cell(mean) + "(" + cell(sd, "%.2g") + ")";
            }
            std::snprintf(buf, sizeof buf, " %22s", text.c_str());
            out << buf;
        }
        out << '\n';
    }
    out << "(mean(sd) over " << rows.size() << " instances; ets over solved instances only)\n";
}

}  // namespace

ReportSummary write_report(const std::vector<ReportRow>& rows, const std::string& out_dir,
                           const std::string& provenance) {
    const fs::path root(out_dir);
    fs::create_directories(root);
    ReportSummary summary;
    auto open = [&](const std::string& name) {
        std::ofstream f(root / name);
        if (!f) throw std::ios_base::failure("cannot write " + (root / name).string());
        f << "# " << provenance << '\n';
        return f;
    };

    {
        auto f = open("table1.txt");
        write_table1(rows, f);
    }

    const auto& names = metric_names();
    std::vector<std::vector<double>> columns;
    for (const auto& n : names) {
        std::vector<double> col;
        for (const auto& r : rows) col.push_back(metric_value(r, n));
        columns.push_back(std::move(col));
    }
    for (const auto& r : rows) {
        if (!r.ets) ++summary.excluded_unsolved;
    }

    {
        auto f = open("spearman_ets.csv");
        csv::write_row(f, {"metric", "spearman_rho", "p_value", "n_obs"});
        const auto& ets_col = columns.back();
        for (std::size_t j = 1; j + 1 < names.size(); ++j) {
            std::vector<double> a, b;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (std::isnan(ets_col[i]) || std::isnan(columns[j][i])) continue;
                a.push_back(ets_col[i]);
                b.push_back(columns[j][i]);
            }
            const auto rho = spearman(a, b);
            csv::write_row(f, {names[j], rho ? csv::format(rho->r) : "NA", rho ? csv::format(rho->p_value) : "NA",
                               std::to_string(a.size())});
        }
    }

    {
        auto f = open("correlations.csv");
        csv::write_row(f, {"var_a", "var_b", "pearson_r", "pearson_p", "spearman_rho", "spearman_p", "n_obs"});
        for (const auto& e : correlation_matrix(names, columns)) {
            auto r = [](const std::optional<Correlation>& c) { return c ? csv::format(c->r) : std::string("NA"); };
            auto p = [](const std::optional<Correlation>& c) { return c ? csv::format(c->p_value) : std::string("NA"); };
            csv::write_row(f, {e.var_a, e.var_b, r(e.pearson), p(e.pearson), r(e.spearman), p(e.spearman),
                               std::to_string(e.n_obs)});
        }
    }

    Dataset data;
    std::vector<int> k_levels;
    for (const auto& r : rows) k_levels.push_back(r.metrics.id.k);
    data.add_factor("k", k_levels);
    for (std::size_t j = 1; j < names.size(); ++j) data.add_numeric(names[j], columns[j]);
    const std::string response = data.add_log("ets");
    Formula full{response, {}};
    if (std::set<int>(k_levels.begin(), k_levels.end()).size() > 1) full.terms.push_back("k");
    full.terms.push_back(data.add_log("nv"));
    for (const char* t : {"lo", "lv", "fnn", "wii", "cc", "zout", "y2", "knn"}) {
        const auto& col = data.numeric(t);
        if (std::any_of(col.begin(), col.end(), [](double v) { return !std::isnan(v); })) full.terms.push_back(t);
    }

    auto full_report = open("regression_full.txt");
    auto final_report = open("regression_final.txt");
    auto residuals = open("residuals.csv");
    auto qq = open("qq.csv");
    auto partial = open("partial_residuals.csv");
    try {
        write_fit_report(ols_fit(data, full), full_report);
        const auto elim = backward_eliminate(data, full);
        final_report << "Backward elimination by AIC from: " << full.to_string() << "\n";
        for (const auto& step : elim.trace) {
            final_report << "  drop " << step.dropped << "  AIC " << cell(step.aic_before, "%.4f") << " -> "
                         << cell(step.aic_after, "%.4f") << "\n";
        }
        final_report << "\n";
        write_fit_report(elim.fit, final_report);
        summary.final_terms = elim.fit.formula.terms;

        const auto diag = diagnostics(elim.fit);
        csv::write_row(residuals, {"fitted", "residual", "leverage", "studentized"});
        for (std::size_t i = 0; i < diag.fitted.size(); ++i) {
            csv::write_row(residuals, {csv::format(diag.fitted[i]), csv::format(diag.residuals[i]),
                                       csv::format(diag.leverage[i]), csv::format(diag.studentized[i])});
        }
        csv::write_row(qq, {"theoretical", "studentized"});
        for (std::size_t i = 0; i < diag.qq_sample.size(); ++i) {
            csv::write_row(qq, {csv::format(diag.qq_theoretical[i]), csv::format(diag.qq_sample[i])});
        }
        csv::write_row(partial, {"term", "x", "partial_residual"});
        for (const auto& pr : diag.partials) {
            for (std::size_t i = 0; i < pr.x.size(); ++i) {
                csv::write_row(partial, {pr.term, csv::format(pr.x[i]), csv::format(pr.partial[i])});
            }
        }
    } catch (const RegressionError& e) {
        full_report << "regression failed: " << e.what() << '\n';
        final_report << "regression failed: " << e.what() << '\n';
    }
    return summary;
}

}  // namespace lonkit
