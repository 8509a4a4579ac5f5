// Command-line front end: solve, adv, inc, generate, export, experiment,
// verify, plot. Exit codes: 0 ok, 1 usage, 2 runtime error, 3 verification
// failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rrr/adversary.hpp"
#include "rrr/core.hpp"
#include "rrr/experiment.hpp"
#include "rrr/generators.hpp"
#include "rrr/incremental.hpp"
#include "rrr/mip.hpp"
#include "rrr/prng.hpp"
#include "rrr/solvers.hpp"
#include "rrr/special_case.hpp"
#include "rrr/svg_plot.hpp"

using nlohmann::json;

namespace {

rrr::Instance load_instance(const std::string& ref) {
    if (ref.rfind("builtin:", 0) == 0) return rrr::builtin(ref.substr(8));
    std::ifstream in(ref);
    if (!in.good()) throw std::runtime_error("cannot open instance file '" + ref + "'");
    return rrr::read_instance(in);
}

std::vector<int> parse_index_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stoi(tok) - 1);  // 1-based on the command line
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<rrr::Cost> parse_cost_list(const std::string& s) {
    std::vector<rrr::Cost> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stoll(tok));
    }
    return out;
}

json selection_json(const std::vector<int>& sel) {
    json arr = json::array();
    for (int i : sel) arr.push_back(i + 1);
    return arr;
}

std::string selection_text(const std::vector<int>& sel) {
    std::string out = "{";
    for (std::size_t t = 0; t < sel.size(); ++t) out += (t ? "," : "") + std::to_string(sel[t] + 1);
    return out + "}";
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out.good()) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

// --- verify: seeded oracle-equivalence suites, exit 3 on any mismatch -------

rrr::Instance verify_sample(rrr::SplitMix64& rng) {
    rrr::GeneratorSpec spec;
    spec.family = rrr::Family::custom;
    spec.K = static_cast<int>(rng.uniform_int(1, 4));
    spec.n_j = static_cast<int>(rng.uniform_int(2, spec.K <= 3 ? 3 : 2));
    spec.gamma = static_cast<int>(rng.uniform_int(0, 3));
    spec.k = static_cast<int>(rng.uniform_int(0, 2));
    spec.cost_lo = 0;
    spec.cost_hi = 20;
    spec.seed = rng.next();
    return rrr::gen_random(spec);
}

rrr::FirstStageSolution verify_feasible(const rrr::Instance& ins, rrr::SplitMix64& rng) {
    rrr::FirstStageSolution x;
    for (int j = 0; j < ins.num_parts(); ++j) {
        std::vector<int> items = ins.parts[j];
        for (int t = 0; t < ins.p[j]; ++t) {
            const int pick = t + static_cast<int>(rng.uniform_int(
                                     0, static_cast<int>(items.size()) - 1 - t));
            std::swap(items[t], items[pick]);
            x.selected.push_back(items[t]);
        }
    }
    std::sort(x.selected.begin(), x.selected.end());
    return x;
}

int run_verify(int adv_n, int inc_n, int special_n, int conv_n, bool json_out) {
    int failures = 0;
    auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        if (!ok) ++failures;
        if (!json_out)
            std::cout << (ok ? "ok   " : "FAIL ") << name << (detail.empty() ? "" : " " + detail)
                      << "\n";
    };

    {
        rrr::SplitMix64 rng(1001);
        bool ok = true;
        std::string detail;
        for (int t = 0; t < inc_n && ok; ++t) {
            const rrr::Instance ins = verify_sample(rng);
            const rrr::FirstStageSolution x = verify_feasible(ins, rng);
            rrr::Scenario s;
            for (int i = 0; i < ins.n; ++i)
                if (static_cast<int>(rng.uniform_int(0, 3)) == 0 &&
                    static_cast<int>(s.attacked.size()) < ins.gamma)
                    s.attacked.push_back(i);
            const auto fast = rrr::inc_solve(ins, x, s);
            const auto slow = rrr::inc_brute(ins, x, s.realize(ins));
            if (fast.value != slow.value) {
                ok = false;
                detail = "seed case " + std::to_string(t);
            }
        }
        report("incremental oracle (" + std::to_string(inc_n) + " cases)", ok, detail);
    }
    {
        rrr::SplitMix64 rng(1002);
        bool ok = true;
        std::string detail;
        for (int t = 0; t < adv_n && ok; ++t) {
            const rrr::Instance ins = verify_sample(rng);
            const rrr::FirstStageSolution x = verify_feasible(ins, rng);
            const auto fast = rrr::adv_solve(ins, x);
            const auto slow = rrr::adv_brute(ins, x);
            if (fast.value != slow.value ||
                rrr::inc_solve(ins, x, fast.scenario).value != fast.value) {
                ok = false;
                detail = "seed case " + std::to_string(t);
            }
        }
        report("adversary oracle (" + std::to_string(adv_n) + " cases)", ok, detail);
    }
    {
        rrr::SplitMix64 rng(1003);
        bool ok = true;
        std::string detail;
        for (int t = 0; t < special_n && ok; ++t) {
            rrr::GeneratorSpec spec;
            spec.family = rrr::Family::custom;
            spec.K = static_cast<int>(rng.uniform_int(1, 8));
            spec.n_j = 2;
            spec.gamma = 1;
            spec.k = 1;
            spec.cost_lo = 0;
            spec.cost_hi = 20;
            spec.seed = rng.next();
            const rrr::Instance ins = rrr::gen_random(spec);
            if (rrr::solve_special(ins).first != rrr::rec_brute(ins).first) {
                ok = false;
                detail = "seed case " + std::to_string(t);
            }
        }
        report("special-case oracle (" + std::to_string(special_n) + " cases)", ok, detail);
    }
    {
        rrr::SplitMix64 rng(1004);
        bool ok = true;
        std::string detail;
        for (int t = 0; t < conv_n && ok; ++t) {
            const rrr::Instance ins = verify_sample(rng);
            const rrr::Cost expect = rrr::rec_brute(ins).first;
            const auto r1 = rrr::solve_m1(ins);
            const auto r2 = rrr::solve_m2(ins);
            if (r1.value != expect || r2.value != expect || r1.log.status != "optimal" ||
                r2.log.status != "optimal") {
                ok = false;
                detail = "seed case " + std::to_string(t);
            }
        }
        report("generation methods converge (" + std::to_string(conv_n) + " cases)", ok, detail);
    }
    {
        rrr::SplitMix64 rng(1005);
        bool ok = true;
        std::string detail;
        for (int t = 0; t < adv_n / 2 && ok; ++t) {
            rrr::Instance ins = verify_sample(rng);
            ins.k = 0;
            const rrr::FirstStageSolution x = verify_feasible(ins, rng);
            if (rrr::adv_k0(ins, x) != rrr::adv_brute(ins, x).value) {
                ok = false;
                detail = "seed case " + std::to_string(t);
            }
        }
        report("k=0 fast path (" + std::to_string(adv_n / 2) + " cases)", ok, detail);
    }

    if (json_out)
        std::cout << json{{"failures", failures}, {"ok", failures == 0}}.dump(2) << "\n";
    else
        std::cout << (failures == 0 ? "verification passed" : "verification FAILED") << "\n";
    return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact solvers for recoverable robust multi-selection under budgeted attacks"};
    app.require_subcommand(1);
    app.fallthrough();
    bool json_out = false;
    app.add_flag("--json", json_out, "machine-readable output");

    // solve
    auto* solve = app.add_subcommand("solve", "solve an instance exactly");
    std::string solve_instance, solve_method = "m2", solve_log;
    double solve_time_limit = 0;
    int solve_max_iter = 0;
    solve->add_option("instance", solve_instance, "instance file or builtin:<name>")->required();
    solve->add_option("--method", solve_method, "brute|m1|m2|special")
        ->check(CLI::IsMember({"brute", "m1", "m2", "special"}));
    solve->add_option("--time-limit", solve_time_limit, "wall-clock limit in seconds");
    solve->add_option("--max-iter", solve_max_iter, "iteration limit");
    solve->add_option("--log", solve_log, "dump the bound log as json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    // adv
    auto* adv = app.add_subcommand("adv", "worst-case attack against a fixed selection");
    std::string adv_instance, adv_x;
    adv->add_option("instance", adv_instance)->required();
    adv->add_option("--x", adv_x, "selected items, 1-based comma list")->required();

    // inc
    auto* inc = app.add_subcommand("inc", "best recovery under realized costs");
    std::string inc_instance, inc_x, inc_attack, inc_costs;
    inc->add_option("instance", inc_instance)->required();
    inc->add_option("--x", inc_x, "selected items, 1-based comma list")->required();
    inc->add_option("--attack", inc_attack, "attacked items, 1-based comma list");
    inc->add_option("--costs", inc_costs, "explicit cost vector, comma list");

    // generate
    auto* gen = app.add_subcommand("generate", "write a generated instance");
    std::string gen_family = "i1", gen_out, gen_partition;
    std::uint64_t gen_seed = 1;
    int gen_K = 0, gen_nj = 0, gen_gamma = 0, gen_k = 0;
    rrr::Cost gen_cost_lo = 1, gen_cost_hi = 100, gen_M = 0;
    gen->add_option("--family", gen_family, "i1|i2|reduction|custom");
    gen->add_option("--seed", gen_seed);
    gen->add_option("--K", gen_K);
    gen->add_option("--n-j", gen_nj);
    gen->add_option("--gamma", gen_gamma);
    gen->add_option("--k", gen_k);
    gen->add_option("--cost-lo", gen_cost_lo);
    gen->add_option("--cost-hi", gen_cost_hi);
    gen->add_option("--partition", gen_partition, "reduction multiset, comma list");
    gen->add_option("--M", gen_M, "reduction anchor cost (default 100Q)");
    gen->add_option("-o,--output", gen_out, "output file (default stdout)");

    // export
    auto* exp = app.add_subcommand("export", "write a solver-neutral LP model");
    std::string exp_instance, exp_formulation = "m1", exp_out, exp_scenarios = "nominal";
    bool exp_allow_large = false, exp_solve = false;
    exp->add_option("instance", exp_instance)->required();
    exp->add_option("--formulation", exp_formulation, "m1|m2|m3")
        ->check(CLI::IsMember({"m1", "m2", "m3"}));
    exp->add_option("--scenarios", exp_scenarios, "m1 pool: nominal|full")
        ->check(CLI::IsMember({"nominal", "full"}));
    exp->add_flag("--allow-large", exp_allow_large, "override the compact-model size guard");
    exp->add_flag("--solve", exp_solve,
                  "run the RRR_EXT_SOLVER command template on the model and report its result");
    exp->add_option("-o,--output", exp_out, "output file (default stdout)");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "run a sweep and write CSV + summary");
    std::string experiment_config, experiment_out = ".";
    bool experiment_plots = false;
    experiment->add_option("config", experiment_config, "experiment config file")->required();
    experiment->add_option("-o,--output", experiment_out, "output directory");
    experiment->add_flag("--plots", experiment_plots, "also emit the SVG charts");

    // verify
    auto* verify = app.add_subcommand("verify", "run the oracle-equivalence property suites");
    bool verify_quick = false;
    verify->add_flag("--quick", verify_quick, "reduced case counts for CI");

    // plot
    auto* plot = app.add_subcommand("plot", "render SVG charts from a results CSV");
    std::string plot_csv, plot_out = ".";
    double plot_limit_ms = 900000;
    plot->add_option("csv", plot_csv, "results CSV from the experiment subcommand")->required();
    plot->add_option("-o,--output", plot_out, "output directory");
    plot->add_option("--time-limit-ms", plot_limit_ms, "truncation value used in averages");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the usage error
        return code == 0 ? 0 : 1;
    }

    try {
        if (solve->parsed()) {
            const rrr::Instance ins = load_instance(solve_instance);
            rrr::SolveLimits limits;
            if (solve_time_limit > 0) limits.time_limit_s = solve_time_limit;
            if (solve_max_iter > 0) limits.max_iter = solve_max_iter;

            rrr::SolveResult r;
            if (solve_method == "brute") {
                const auto [value, x] = rrr::rec_brute(ins, limits.enum_bound);
                r.value = value;
                r.x = x;
                r.log.method = "brute";
                r.log.status = "optimal";
            } else if (solve_method == "special") {
                const auto [value, x] = rrr::solve_special(ins);
                r.value = value;
                r.x = x;
                r.log.method = "special";
                r.log.status = "optimal";
            } else if (solve_method == "m1") {
                r = rrr::solve_m1(ins, limits);
            } else {
                r = rrr::solve_m2(ins, limits);
            }

            if (json_out) {
                json out{{"method", r.log.method},
                         {"status", r.log.status},
                         {"value", r.value},
                         {"selection", selection_json(r.x.selected)},
                         {"iterations", r.log.iterations.size()}};
                if (!r.log.iterations.empty()) {
                    out["lb"] = r.log.iterations.back().lb;
                    out["ub"] = r.log.iterations.back().ub;
                }
                if (solve_log == "json") {
                    json iters = json::array();
                    for (const auto& it : r.log.iterations)
                        iters.push_back({{"lb", it.lb},
                                         {"ub", it.ub},
                                         {"master_x", selection_json(it.master_x)},
                                         {"generated", it.generated}});
                    out["log"] = iters;
                }
                std::cout << out.dump(2) << "\n";
            } else {
                std::cout << "method: " << r.log.method << "\nstatus: " << r.log.status
                          << "\nvalue: " << r.value
                          << "\nselection: " << selection_text(r.x.selected) << "\n";
                if (!r.log.iterations.empty())
                    std::cout << "iterations: " << r.log.iterations.size()
                              << "\nlb: " << r.log.iterations.back().lb
                              << "\nub: " << r.log.iterations.back().ub << "\n";
                if (solve_log == "csv") {
                    std::cout << "iter,lb,ub,generated\n";
                    for (std::size_t t = 0; t < r.log.iterations.size(); ++t)
                        std::cout << t + 1 << ',' << r.log.iterations[t].lb << ','
                                  << r.log.iterations[t].ub << ','
                                  << r.log.iterations[t].generated << "\n";
                }
            }
        } else if (adv->parsed()) {
            const rrr::Instance ins = load_instance(adv_instance);
            const rrr::FirstStageSolution x{parse_index_list(adv_x)};
            const rrr::AdvResult r = rrr::adv_solve(ins, x);
            if (json_out) {
                std::cout << json{{"value", r.value},
                                  {"beta", r.beta_star},
                                  {"alpha", r.alpha_star},
                                  {"allocation", r.budget_alloc},
                                  {"scenario", selection_json(r.scenario.attacked)}}
                                 .dump(2)
                          << "\n";
            } else {
                std::cout << "value: " << r.value << "\nbeta: " << r.beta_star << "\nalpha:";
                for (rrr::Cost a : r.alpha_star) std::cout << ' ' << a;
                std::cout << "\nallocation:";
                for (int g : r.budget_alloc) std::cout << ' ' << g;
                std::cout << "\nscenario: " << selection_text(r.scenario.attacked) << "\n";
            }
        } else if (inc->parsed()) {
            const rrr::Instance ins = load_instance(inc_instance);
            const rrr::FirstStageSolution x{parse_index_list(inc_x)};
            std::vector<rrr::Cost> costs;
            if (!inc_costs.empty()) {
                costs = parse_cost_list(inc_costs);
            } else {
                rrr::Scenario s{parse_index_list(inc_attack)};
                costs = s.realize(ins);
            }
            const rrr::IncResult r = rrr::inc_solve(ins, x, costs);
            if (json_out)
                std::cout << json{{"value", r.value},
                                  {"recovery", selection_json(r.recovery.selected)}}
                                 .dump(2)
                          << "\n";
            else
                std::cout << "value: " << r.value
                          << "\nrecovery: " << selection_text(r.recovery.selected) << "\n";
        } else if (gen->parsed()) {
            rrr::Instance ins;
            if (gen_family == "reduction") {
                rrr::PartitionInput in;
                in.A = parse_cost_list(gen_partition);
                in.M = gen_M;
                ins = rrr::gen_reduction(in);
            } else {
                rrr::GeneratorSpec spec;
                spec.family = rrr::family_from_name(gen_family);
                spec.K = gen_K;
                spec.n_j = gen_nj;
                spec.gamma = gen_gamma;
                spec.k = gen_k;
                spec.cost_lo = gen_cost_lo;
                spec.cost_hi = gen_cost_hi;
                spec.seed = gen_seed;
                ins = rrr::gen_random(spec);
            }
            const std::string text = rrr::write_instance(ins);
            if (gen_out.empty())
                std::cout << text;
            else
                write_file(gen_out, text);
        } else if (exp->parsed()) {
            const rrr::Instance ins = load_instance(exp_instance);
            rrr::MipModel model;
            if (exp_formulation == "m1") {
                std::vector<rrr::Scenario> pool{rrr::Scenario{}};
                if (exp_scenarios == "full") pool = rrr::full_scenario_pool(ins, 100000);
                model = rrr::build_m1(ins, pool);
            } else if (exp_formulation == "m2") {
                rrr::CutCandidate initial;
                initial.beta = 0;
                for (int j = 0; j < ins.num_parts(); ++j) {
                    std::vector<rrr::Cost> costs;
                    for (int i : ins.parts[j]) costs.push_back(ins.c_lower[i]);
                    std::sort(costs.begin(), costs.end());
                    initial.alpha.push_back(ins.p[j] > 0 ? costs[ins.p[j] - 1] : 0);
                }
                model = rrr::build_m2(ins, {initial});
            } else {
                model = rrr::build_m3(ins, exp_allow_large);
            }
            const std::string lp = rrr::write_lp(model);
            if (exp_out.empty() && !exp_solve)
                std::cout << lp;
            else if (!exp_out.empty())
                write_file(exp_out, lp);
            if (exp_solve) {
                const char* tmpl = std::getenv("RRR_EXT_SOLVER");
                if (tmpl == nullptr || std::string(tmpl).empty())
                    throw std::runtime_error(
                        "--solve requires the RRR_EXT_SOLVER command template");
                const rrr::ExternalSolution sol = rrr::run_external(model, tmpl);
                if (json_out)
                    std::cout << json{{"status", sol.status}, {"objective", sol.objective}}.dump(2)
                              << "\n";
                else
                    std::cout << "status: " << sol.status << "\nobjective: " << sol.objective
                              << "\n";
            }
        } else if (experiment->parsed()) {
            std::ifstream in(experiment_config);
            if (!in.good())
                throw std::runtime_error("cannot open config '" + experiment_config + "'");
            const rrr::ExperimentConfig cfg = rrr::read_experiment_config(in);
            const std::vector<rrr::ExperimentRecord> records = rrr::run_experiment(cfg);
            std::filesystem::create_directories(experiment_out);
            write_file(experiment_out + "/results.csv", rrr::records_to_csv(records));
            const auto rows = rrr::summarize(records, cfg.time_limit_s * 1000.0);
            write_file(experiment_out + "/summary.txt", rrr::summary_text(rows));
            if (experiment_plots)
                for (const auto& [name, text] :
                     rrr::make_plots(records, cfg.time_limit_s * 1000.0))
                    write_file(experiment_out + "/" + name, text);
            if (json_out)
                std::cout << json{{"records", records.size()},
                                  {"output", experiment_out}}.dump(2)
                          << "\n";
            else
                std::cout << "wrote " << records.size() << " records to " << experiment_out
                          << "\n";
        } else if (verify->parsed()) {
            const int scale = verify_quick ? 1 : 10;
            return run_verify(100 * scale, 100 * scale, 50 * scale, 20 * scale, json_out);
        } else if (plot->parsed()) {
            std::ifstream in(plot_csv);
            if (!in.good()) throw std::runtime_error("cannot open CSV '" + plot_csv + "'");
            const std::vector<rrr::ExperimentRecord> records = rrr::records_from_csv(in);
            std::filesystem::create_directories(plot_out);
            for (const auto& [name, text] : rrr::make_plots(records, plot_limit_ms))
                write_file(plot_out + "/" + name, text);
            if (!json_out) std::cout << "wrote charts to " << plot_out << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
