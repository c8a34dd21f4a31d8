// petribench: Petri-net model-checking workbench CLI.
//
// Public subcommands: generate, list-instances, explore, check, bench,
// report. Underscore-prefixed subcommands are internal plumbing used by
// the harness (confined workers) and the test suite (limit breachers);
// they are hidden from --help but stable.

#include <unistd.h>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "petribench/engine.hpp"
#include "petribench/formula.hpp"
#include "petribench/harness.hpp"
#include "petribench/modelgen.hpp"
#include "petribench/net.hpp"
#include "petribench/pnml.hpp"
#include "petribench/report.hpp"

namespace {

using namespace petribench;

std::string marking_text(const PetriNet& net, const Marking& m) {
    std::string out;
    for (PlaceId p = 0; p < m.size(); ++p) {
        if (m[p] == 0) continue;
        if (!out.empty()) out += ' ';
        out += net.place_name(p);
        if (m[p] != 1) out += "=" + std::to_string(m[p]);
    }
    return out.empty() ? "(empty)" : out;
}

int cmd_generate(const std::string& family, const std::string& param,
                 const std::string& out_path) {
    ModelParams params = ModelParams::parse(family, param);
    PetriNet net = generate(family, params);
    write_pnml_file(net, out_path);
    return 0;
}

int cmd_list_instances(const std::string& family) {
    if (family.empty()) {
        for (const ModelFamily& fam : model_families())
            std::cout << fam.name << '\n';
        return 0;
    }
    const ModelFamily* fam = find_family(family);
    if (!fam) {
        std::cerr << "error: unknown family '" << family << "'\n";
        return 1;
    }
    for (const ModelParams& p : fam->official_parameters)
        std::cout << p.text() << '\n';
    return 0;
}

int cmd_explore(const std::string& model, const std::string& order,
                std::uint64_t max_states, double timeout, bool graph) {
    PetriNet net = parse_pnml_file(model);
    ExploreOptions opts;
    opts.max_states = max_states;
    opts.max_seconds = timeout;
    opts.order = order == "dfs" ? Order::DFS : Order::BFS;
    opts.store_graph = graph;
    StateSpaceResult res = explore(net, opts);

    std::cout << "states " << res.count.get_str() << '\n';
    std::cout << "exhausted " << (res.exhausted ? "true" : "false")
              << '\n';
    TokenCount max_bound = 0;
    for (TokenCount b : res.place_bounds)
        max_bound = std::max(max_bound, b);
    std::cout << "max_bound " << max_bound
              << (res.exhausted ? "" : " (lower bound)") << '\n';
    std::cout << "safe "
              << (max_bound <= 1 ? (res.exhausted ? "true" : "so-far")
                                 : "false")
              << '\n';
    std::cout << "fired " << res.fired.size() << "/"
              << net.transition_count() << '\n';
    if (res.dead_marking)
        std::cout << "deadlock " << marking_text(net, *res.dead_marking)
                  << '\n';
    else
        std::cout << "deadlock "
                  << (res.exhausted ? "none" : "unknown") << '\n';
    if (graph && res.exhausted) {
        ReachabilityGraph g = build_graph(net, opts);
        std::cout << "edges " << g.edges.size() << '\n';
    }
    return 0;
}

int cmd_check(const std::string& model, const std::string& formulae_path,
              double timeout) {
    PetriNet net = parse_pnml_file(model);
    std::FILE* f = std::fopen(formulae_path.c_str(), "rb");
    if (!f) {
        std::cerr << "error: cannot open " << formulae_path << '\n';
        return 1;
    }
    std::string text;
    char buf[4096];
    std::size_t k;
    while ((k = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, k);
    std::fclose(f);

    FormulaSet set = parse_formulae(text);
    ExploreOptions opts;
    opts.max_seconds = timeout;
    ResultVector v = evaluate(net, set, opts);
    for (const std::string& diag : v.diagnostics)
        std::cerr << "note: " << diag << '\n';
    std::cout << format_vector(v) << '\n';
    return 0;
}

int cmd_bench(const std::string& plan_path, const std::string& out_dir,
              int workers) {
    ExaminationPlan plan = parse_plan_file(plan_path);
    if (!out_dir.empty()) plan.output_dir = out_dir;
    if (workers > 0) {
        plan.workers = workers;
    } else if (const char* env = std::getenv("PETRIBENCH_WORKERS")) {
        int n = std::atoi(env);
        if (n > 0) plan.workers = n;
    }
    std::vector<RunRecord> records = run_examination(plan);
    std::size_t ok = 0;
    for (const RunRecord& rec : records)
        if (rec.verdict == Verdict::OK) ++ok;
    std::cout << "wrote " << plan.output_dir << "/results.csv ("
              << records.size() << " records, " << ok << " OK)\n";
    return 0;
}

int cmd_report(const std::string& results_dir, const std::string& out_dir,
               const std::string& charts, bool tables) {
    ReportOptions options;
    if (!charts.empty() || tables) {
        options = ReportOptions{false, false, false, false, false};
        options.tables = tables;
        std::size_t start = 0;
        std::string list = charts + ",";
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (list[i] != ',') continue;
            std::string kind = list.substr(start, i - start);
            start = i + 1;
            if (kind.empty()) continue;
            if (kind == "scaling")
                options.scaling = true;
            else if (kind == "execution")
                options.execution = true;
            else if (kind == "radar-model")
                options.radar_model = true;
            else if (kind == "radar-tool")
                options.radar_tool = true;
            else {
                std::cerr << "error: unknown chart kind '" << kind
                          << "'\n";
                return 1;
            }
        }
    }
    std::vector<std::string> written =
        write_report(results_dir, out_dir, options);
    std::cout << "wrote " << written.size() << " files to " << out_dir
              << '\n';
    return 0;
}

// ------------------------------------------------------- internal verbs

int cmd_exam(const std::string& examination, const std::string& model,
             const std::string& formulae_path, double timeout) {
    auto exam = parse_examination(examination);
    if (!exam) {
        std::cerr << "error: unknown examination '" << examination
                  << "'\n";
        return 1;
    }
    PetriNet net = parse_pnml_file(model);
    if (*exam == Examination::StateSpace) {
        ExploreOptions opts;
        opts.max_states.reset();  // the confinement box is the budget
        opts.max_seconds.reset();
        StateSpaceResult res = explore(net, opts);
        if (!res.exhausted) {
            std::cerr << "state space not exhausted\n";
            return 1;
        }
        std::cout << "STATE_SPACE " << res.count.get_str() << std::endl;
        return 0;
    }
    std::FILE* f = std::fopen(formulae_path.c_str(), "rb");
    if (!f) {
        std::cerr << "error: cannot open " << formulae_path << '\n';
        return 1;
    }
    std::string text;
    char buf[4096];
    std::size_t k;
    while ((k = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, k);
    std::fclose(f);
    FormulaSet set = parse_formulae(text);

    // Budget split evenly per formula: one stubborn formula must not
    // starve the rest of the vector.
    ExploreOptions opts;
    opts.max_states.reset();
    if (timeout > 0 && !set.items.empty())
        opts.max_seconds = timeout / static_cast<double>(set.items.size());
    else
        opts.max_seconds.reset();

    std::string vector;
    for (const FormulaItem& item : set.items) {
        FormulaSet one;
        one.items.push_back(item);
        ResultVector v = evaluate(net, one, opts);
        vector += format_vector(v);
    }
    std::cout << "FORMULA_VECTOR " << vector << std::endl;
    return 0;
}

int cmd_materialize(const std::string& family, const std::string& param,
                    const std::string& out_path) {
    ModelParams params = ModelParams::parse(family, param);
    PetriNet net = generate(family, params);
    write_pnml_file(net, out_path);
    return 0;
}

[[noreturn]] void cmd_spin() {
    volatile std::uint64_t sink = 0;
    for (;;) ++sink;
}

[[noreturn]] void cmd_hog() {
    // Gradual ramp to ~128 MiB of touched pages, then hold: the memory
    // sampler must catch the breach, never a wall-clock expiry.
    constexpr std::size_t kBlock = 1 << 20;
    std::vector<char*> blocks;
    for (int i = 0; i < 128; ++i) {
        char* block = static_cast<char*>(std::malloc(kBlock));
        if (block) {
            for (std::size_t off = 0; off < kBlock; off += 4096)
                block[off] = static_cast<char>(off);
            blocks.push_back(block);
        }
        usleep(10'000);
    }
    for (;;) usleep(100'000);
}

int cmd_fake(const std::string& model, const std::string& spin_marker) {
    if (!spin_marker.empty() &&
        model.find(spin_marker) != std::string::npos)
        cmd_spin();
    std::cout << "STATE_SPACE 0" << std::endl;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Petri-net model-checking workbench"};
    app.require_subcommand(1);

    std::string family, param, out_path, model, order = "bfs";
    std::string formulae_path, plan_path, results_dir, charts;
    std::string examination, spin_marker;
    std::uint64_t max_states = 10'000'000;
    double timeout = 300.0;
    bool graph = false;
    bool tables = false;
    int workers = 0;

    CLI::App* generate = app.add_subcommand(
        "generate", "Generate a model instance as PNML");
    generate->add_option("--family", family, "Model family")->required();
    generate->add_option("--param", param, "Scaling parameter")
        ->required();
    generate->add_option("--out", out_path, "Output PNML file")
        ->required();

    CLI::App* list = app.add_subcommand(
        "list-instances", "List families or official parameters");
    list->add_option("--family", family,
                     "Family whose parameters to list");

    CLI::App* explore_cmd =
        app.add_subcommand("explore", "Explore a model's state space");
    explore_cmd->add_option("model", model, "PNML model file")
        ->required();
    explore_cmd->add_option("--order", order, "bfs or dfs")
        ->check(CLI::IsMember({"bfs", "dfs"}));
    explore_cmd->add_option("--max-states", max_states,
                            "State budget (default 10000000)");
    explore_cmd->add_option("--timeout", timeout,
                            "Time budget in seconds (default 300)");
    explore_cmd->add_flag("--graph", graph,
                          "Also build the reachability graph");

    CLI::App* check =
        app.add_subcommand("check", "Evaluate a formula set");
    check->add_option("model", model, "PNML model file")->required();
    check->add_option("--formulae", formulae_path, "Formula file")
        ->required();
    check->add_option("--timeout", timeout,
                      "Time budget in seconds (default 300)");

    CLI::App* bench =
        app.add_subcommand("bench", "Run an examination plan");
    bench->add_option("--plan", plan_path, "Plan file")->required();
    bench->add_option("--out", out_path, "Output directory override");
    bench->add_option("--workers", workers,
                      "Parallel series (default PETRIBENCH_WORKERS or 1)");

    CLI::App* report =
        app.add_subcommand("report", "Render tables and charts");
    report->add_option("--results", results_dir, "bench output directory")
        ->required();
    report->add_option("--out", out_path, "Report output directory")
        ->required();
    report->add_option(
        "--charts", charts,
        "Comma list of scaling,execution,radar-model,radar-tool");
    report->add_flag("--tables", tables, "Write summary tables");

    CLI::App* exam = app.add_subcommand("_exam", "");
    exam->group("");
    exam->add_option("--examination", examination)->required();
    exam->add_option("--model", model)->required();
    exam->add_option("--formulae", formulae_path);
    double exam_timeout = 0.0;
    exam->add_option("--timeout", exam_timeout);

    CLI::App* materialize = app.add_subcommand("_materialize", "");
    materialize->group("");
    materialize->add_option("--family", family)->required();
    materialize->add_option("--param", param)->required();
    materialize->add_option("--out", out_path)->required();

    CLI::App* spin = app.add_subcommand("_spin", "");
    spin->group("");
    CLI::App* hog = app.add_subcommand("_hog", "");
    hog->group("");

    CLI::App* fake = app.add_subcommand("_fake", "");
    fake->group("");
    fake->add_option("--model", model)->required();
    fake->add_option("--spin-marker", spin_marker);

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed())
            return cmd_generate(family, param, out_path);
        if (list->parsed()) return cmd_list_instances(family);
        if (explore_cmd->parsed())
            return cmd_explore(model, order, max_states, timeout, graph);
        if (check->parsed())
            return cmd_check(model, formulae_path, timeout);
        if (bench->parsed())
            return cmd_bench(plan_path, out_path, workers);
        if (report->parsed())
            return cmd_report(results_dir, out_path, charts, tables);
        if (exam->parsed())
            return cmd_exam(examination, model, formulae_path,
                            exam_timeout);
        if (materialize->parsed())
            return cmd_materialize(family, param, out_path);
        if (spin->parsed()) cmd_spin();
        if (hog->parsed()) cmd_hog();
        if (fake->parsed()) return cmd_fake(model, spin_marker);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
