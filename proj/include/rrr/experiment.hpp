#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <istream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rrr/core.hpp"
#include "rrr/generators.hpp"
#include "rrr/solvers.hpp"
#include "rrr/special_case.hpp"

namespace rrr {

// Batch harness configuration. The sweep parameter is gamma for i1/custom and
// the part count for i2.
struct ExperimentConfig {
    Family family = Family::i1;
    std::string builtin_name;  // nonempty: run on this builtin instance instead of a sweep
    int K = 5;
    int n_j = 5;
    int k = 2;
    int sweep_lo = 2;
    int sweep_hi = 25;
    int sweep_step = 1;
    int replications = 3;
    double time_limit_s = 5.0;
    int max_iter = 100000;
    std::vector<std::string> methods{"m1", "m2"};
    std::uint64_t seed = 1;
    int threads = 0;  // 0 = hardware concurrency
    Cost cost_lo = 1;
    Cost cost_hi = 100;
    std::uint64_t enum_bound = 1000000;
};

struct ExperimentRecord {
    std::string instance_id;
    std::uint64_t seed = 0;
    int sweep = 0;
    std::string method;
    std::string status;  // optimal | time-limit | error
    std::int64_t time_ms = 0;
    int iterations = 0;
    Cost value = 0;
    Cost lb = 0;
    Cost ub = 0;
};

// Config file, same dialect as instance files:
//
//   format-version: 1
//   family: i1
//   K: 5
//   n_j: 5
//   k: 2
//   sweep: 2 25 1
//   replications: 3
//   time_limit_s: 5
//   methods: m1 m2
//   seed: 1
inline ExperimentConfig read_experiment_config(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto end = line.find_last_not_of(" \t\r");
        if (end == std::string::npos) continue;
        line.erase(end + 1);
        const auto colon = line.find(':');
        if (colon == std::string::npos)
            throw ParseError(line_no, "expected 'key: value', found '" + line + "'");
        std::string key = line.substr(0, colon);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t") + 1);
        std::istringstream value(line.substr(colon + 1));

        auto fail = [&](const std::string& what) { throw ParseError(line_no, what); };
        if (!header_seen) {
            int v = 0;
            if (key != "format-version" || !(value >> v) || v != 1)
                fail("missing 'format-version: 1' header");
            header_seen = true;
            continue;
        }
        if (key == "family") {
            std::string f;
            value >> f;
            cfg.family = family_from_name(f);
        } else if (key == "builtin") {
            value >> cfg.builtin_name;
        } else if (key == "K") {
            if (!(value >> cfg.K)) fail("K expects an integer");
        } else if (key == "n_j") {
            if (!(value >> cfg.n_j)) fail("n_j expects an integer");
        } else if (key == "k") {
            if (!(value >> cfg.k)) fail("k expects an integer");
        } else if (key == "sweep") {
            if (!(value >> cfg.sweep_lo >> cfg.sweep_hi)) fail("sweep expects 'lo hi [step]'");
            if (!(value >> cfg.sweep_step)) cfg.sweep_step = 1;
        } else if (key == "replications") {
            if (!(value >> cfg.replications)) fail("replications expects an integer");
        } else if (key == "time_limit_s") {
            if (!(value >> cfg.time_limit_s)) fail("time_limit_s expects a number");
        } else if (key == "max_iter") {
            if (!(value >> cfg.max_iter)) fail("max_iter expects an integer");
        } else if (key == "methods") {
            cfg.methods.clear();
            std::string mth;
            while (value >> mth) cfg.methods.push_back(mth);
        } else if (key == "seed") {
            if (!(value >> cfg.seed)) fail("seed expects an integer");
        } else if (key == "threads") {
            if (!(value >> cfg.threads)) fail("threads expects an integer");
        } else if (key == "cost_range") {
            if (!(value >> cfg.cost_lo >> cfg.cost_hi)) fail("cost_range expects 'lo hi'");
        } else if (key == "enum_bound") {
            if (!(value >> cfg.enum_bound)) fail("enum_bound expects an integer");
        } else {
            fail("unknown field '" + key + "'");
        }
    }
    if (!header_seen) throw ParseError(line_no, "missing 'format-version: 1' header");
    if (cfg.replications < 1) throw ParseError(line_no, "replications must be at least 1");
    if (cfg.time_limit_s <= 0) throw ParseError(line_no, "time_limit_s must be positive");
    return cfg;
}

namespace detail {

inline Instance instance_for(const ExperimentConfig& cfg, int sweep, std::uint64_t inst_seed) {
    if (!cfg.builtin_name.empty()) return builtin(cfg.builtin_name);
    GeneratorSpec spec;
    spec.family = cfg.family;
    spec.cost_lo = cfg.cost_lo;
    spec.cost_hi = cfg.cost_hi;
    spec.seed = inst_seed;
    if (cfg.family == Family::i2) {
        spec.K = sweep;
    } else {
        spec.K = cfg.K;
        spec.n_j = cfg.n_j;
        spec.gamma = sweep;
        spec.k = cfg.k;
    }
    return gen_random(spec);
}

inline std::string instance_label(const ExperimentConfig& cfg, int sweep, int rep) {
    if (!cfg.builtin_name.empty()) return cfg.builtin_name + "-r" + std::to_string(rep);
    const char axis = cfg.family == Family::i2 ? 'K' : 'g';
    return family_name(cfg.family) + "-" + axis + std::to_string(sweep) + "-r" +
           std::to_string(rep);
}

}  // namespace detail

// Runs every (sweep, replication, method) combination. Instances are keyed by
// a seed derived from (base seed, sweep, replication), so the record set is
// identical regardless of thread count; only wall times vary.
inline std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg) {
    struct Task {
        int sweep, rep;
        std::uint64_t seed;
        std::string label;
    };
    std::vector<Task> tasks;
    if (!cfg.builtin_name.empty()) {
        tasks.push_back({0, 0, cfg.seed, detail::instance_label(cfg, 0, 0)});
    } else {
        for (int v = cfg.sweep_lo; v <= cfg.sweep_hi; v += cfg.sweep_step)
            for (int r = 0; r < cfg.replications; ++r)
                tasks.push_back({v, r, SplitMix64::mix(cfg.seed, static_cast<std::uint64_t>(v),
                                                       static_cast<std::uint64_t>(r)),
                                 detail::instance_label(cfg, v, r)});
    }

    std::vector<std::vector<ExperimentRecord>> results(tasks.size());
    std::atomic<std::size_t> next{0};
    const int threads = cfg.threads > 0
                            ? cfg.threads
                            : std::max(1u, std::thread::hardware_concurrency());

    auto run_task = [&](std::size_t idx) {
        const Task& task = tasks[idx];
        const Instance ins = detail::instance_for(cfg, task.sweep, task.seed);
        for (const std::string& method : cfg.methods) {
            ExperimentRecord rec;
            rec.instance_id = task.label;
            rec.seed = task.seed;
            rec.sweep = task.sweep;
            rec.method = method;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                if (method == "m1" || method == "m2") {
                    SolveLimits limits;
                    limits.time_limit_s = cfg.time_limit_s;
                    limits.max_iter = cfg.max_iter;
                    limits.enum_bound = cfg.enum_bound;
                    const SolveResult r = method == "m1" ? solve_m1(ins, limits)
                                                         : solve_m2(ins, limits);
                    rec.status = r.log.status;
                    rec.iterations = static_cast<int>(r.log.iterations.size());
                    rec.value = r.value;
                    rec.lb = r.log.iterations.back().lb;
                    rec.ub = r.log.iterations.back().ub;
                } else if (method == "brute") {
                    if (feasible_count(ins, cfg.enum_bound) >= cfg.enum_bound)
                        continue;  // enumeration would trip the bound; skip quietly
                    const auto [value, x] = rec_brute(ins, cfg.enum_bound);
                    rec.status = "optimal";
                    rec.iterations = 1;
                    rec.value = rec.lb = rec.ub = value;
                } else if (method == "special") {
                    const auto [value, x] = solve_special(ins);
                    rec.status = "optimal";
                    rec.iterations = 1;
                    rec.value = rec.lb = rec.ub = value;
                } else {
                    throw std::invalid_argument("unknown method '" + method + "'");
                }
            } catch (const std::exception&) {
                rec.status = "error";
            }
            rec.time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
            results[idx].push_back(std::move(rec));
        }
    };

    if (threads <= 1 || tasks.size() <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
                    run_task(i);
            });
        for (auto& th : pool) th.join();
    }

    std::vector<ExperimentRecord> records;
    for (auto& group : results)
        for (auto& rec : group) records.push_back(std::move(rec));
    std::sort(records.begin(), records.end(),
              [](const ExperimentRecord& a, const ExperimentRecord& b) {
                  if (a.sweep != b.sweep) return a.sweep < b.sweep;
                  if (a.instance_id != b.instance_id) return a.instance_id < b.instance_id;
                  return a.method < b.method;
              });
    return records;
}

inline std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
    std::ostringstream out;
    out << "instance_id,seed,sweep,method,status,time_ms,iterations,value,lb,ub\n";
    for (const ExperimentRecord& r : records)
        out << r.instance_id << ',' << r.seed << ',' << r.sweep << ',' << r.method << ','
            << r.status << ',' << r.time_ms << ',' << r.iterations << ',' << r.value << ','
            << r.lb << ',' << r.ub << "\n";
    return out.str();
}

inline std::vector<ExperimentRecord> records_from_csv(std::istream& in) {
    std::vector<ExperimentRecord> records;
    std::string line;
    int line_no = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        if (header) {
            if (line.rfind("instance_id,", 0) != 0)
                throw ParseError(line_no, "missing CSV header");
            header = false;
            continue;
        }
        std::istringstream ls(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 10) throw ParseError(line_no, "expected 10 CSV fields");
        ExperimentRecord r;
        try {
            r.instance_id = fields[0];
            r.seed = std::stoull(fields[1]);
            r.sweep = std::stoi(fields[2]);
            r.method = fields[3];
            r.status = fields[4];
            r.time_ms = std::stoll(fields[5]);
            r.iterations = std::stoi(fields[6]);
            r.value = std::stoll(fields[7]);
            r.lb = std::stoll(fields[8]);
            r.ub = std::stoll(fields[9]);
        } catch (const std::exception&) {
            throw ParseError(line_no, "malformed CSV record");
        }
        records.push_back(std::move(r));
    }
    if (header) throw ParseError(line_no, "empty CSV");
    return records;
}

struct SummaryRow {
    int sweep = 0;
    std::string method;
    int count = 0;
    double fraction_optimal = 0;
    double avg_time_ms_truncated = 0;  // non-optimal runs count as the limit
    double avg_iterations = 0;         // over instances solved by every method
    int iterations_count = 0;
};

// Aggregation rules: truncated runs contribute the full time limit to the
// average; iteration averages only cover instances solved to optimality by
// every method appearing in the record set.
inline std::vector<SummaryRow> summarize(const std::vector<ExperimentRecord>& records,
                                         double time_limit_ms) {
    std::set<std::string> all_methods;
    for (const auto& r : records) all_methods.insert(r.method);

    std::map<std::string, int> solved_count;  // instance -> #methods optimal
    for (const auto& r : records)
        if (r.status == "optimal") ++solved_count[r.instance_id];
    std::set<std::string> solved_by_all;
    for (const auto& [id, cnt] : solved_count)
        if (cnt == static_cast<int>(all_methods.size())) solved_by_all.insert(id);

    std::map<std::pair<int, std::string>, SummaryRow> groups;
    for (const auto& r : records) {
        SummaryRow& row = groups[{r.sweep, r.method}];
        row.sweep = r.sweep;
        row.method = r.method;
        ++row.count;
        if (r.status == "optimal") row.fraction_optimal += 1;
        row.avg_time_ms_truncated +=
            r.status == "optimal" ? static_cast<double>(r.time_ms) : time_limit_ms;
        if (solved_by_all.count(r.instance_id)) {
            row.avg_iterations += r.iterations;
            ++row.iterations_count;
        }
    }
    std::vector<SummaryRow> out;
    for (auto& [key, row] : groups) {
        row.fraction_optimal /= row.count;
        row.avg_time_ms_truncated /= row.count;
        if (row.iterations_count > 0) row.avg_iterations /= row.iterations_count;
        out.push_back(row);
    }
    return out;
}

inline std::string summary_text(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << "sweep method count frac_optimal avg_time_ms avg_iterations\n";
    for (const SummaryRow& r : rows) {
        out << r.sweep << ' ' << r.method << ' ' << r.count << ' ' << r.fraction_optimal << ' '
            << r.avg_time_ms_truncated << ' ';
        if (r.iterations_count > 0)
            out << r.avg_iterations;
        else
            out << "n/a";
        out << "\n";
    }
    return out.str();
}

}  // namespace rrr
