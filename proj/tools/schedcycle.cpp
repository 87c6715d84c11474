// schedcycle: bounds, simulation with cycle detection, exhaustive enumeration
// and Gantt rendering for periodic task systems on identical processors.
//
// Exit codes: 0 ok / feasible, 1 other failure, 2 deadline miss,
// 3 horizon exhausted, 4 input error.

#include "schedcycle/bounds.hpp"
#include "schedcycle/cycle_detect.hpp"
#include "schedcycle/enumerator.hpp"
#include "schedcycle/gantt.hpp"
#include "schedcycle/io.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <set>

using namespace schedcycle;

namespace {

enum Exit { ok = 0, failure = 1, miss = 2, exhausted = 3, bad_input = 4 };

std::string show(const BoundValue &b) {
    if (b.value)
        return std::to_string(*b.value);
    return "n/a";
}

std::optional<PriorityOrder> resolve_order(const TaskSystem &sys, const std::vector<TaskId> &cli_order) {
    if (!cli_order.empty()) {
        require_priority_order(sys, cli_order);
        return cli_order;
    }
    bool all = std::all_of(sys.tasks.begin(), sys.tasks.end(), [](const Task &t) { return t.priority.has_value(); });
    if (!all)
        return std::nullopt;
    return priority_ranking(SchedulerSpec::fixed_priority(PriorityRule::explicit_list), sys);
}

void print_warnings(const TaskSystem &sys) {
    for (const Diagnostic &d : validate(sys))
        if (!d.is_error())
            std::cerr << "warning: " << d.message << "\n";
}

void require_distinct(const std::vector<std::string> &paths) {
    std::set<std::string> seen;
    for (const std::string &p : paths)
        if (!p.empty() && !seen.insert(p).second)
            throw ConfigError("output path '" + p + "' given twice");
}

int run_bounds(const std::string &path, const std::vector<TaskId> &order, bool as_json) {
    const TaskSystem sys = load_system(path);
    print_warnings(sys);
    const BoundsReport r = bounds_report(sys, resolve_order(sys, order));
    if (as_json) {
        std::cout << emit_report(r);
        return ok;
    }
    std::cout << "hyperperiod          " << r.hyperperiod << "\n"
              << "general product end  " << r.general_product_end << "\n"
              << "sync product end     " << r.sync_product_end << "\n"
              << "sn                   " << show(r.sn) << "\n"
              << "sn interval end      " << show(r.sn_interval_end) << "\n"
              << "sn_hat               " << show(r.sn_hat) << "\n"
              << "sn_hat interval end  " << show(r.sn_hat_interval_end) << "\n"
              << "omax + 2H            " << show(r.leung) << "\n"
              << "best                 " << r.best << " (" << r.best_source << ")\n";
    for (const std::string &note : r.applicability_notes)
        std::cout << "  note: " << note << "\n";
    return ok;
}

struct SimulateArgs {
    std::string system, scheduler = "edf", trace, events, report, svg;
    std::optional<Tick> horizon;
    bool stop_on_miss = false, gantt = false;
};

int run_simulate(const SimulateArgs &a) {
    require_distinct({a.trace, a.events, a.report, a.svg});
    const TaskSystem sys = load_system(a.system);
    print_warnings(sys);
    const SchedulerSpec spec = load_scheduler(a.scheduler);
    CycleOptions opts;
    opts.horizon = a.horizon;
    opts.stop_on_miss = a.stop_on_miss;
    const CycleRun run = run_cycle_detection(sys, spec, opts);
    const CycleReport &r = run.report;

    std::cout << "scheduler   " << describe(spec) << "\n"
              << "verdict     " << to_string(r.verdict) << "\n"
              << "simulated   " << run.trace.horizon() << " ticks (bound " << r.bound_used << ")\n";
    if (r.period_len)
        std::cout << "transient   " << *r.transient_len << "\nperiod      " << *r.period_len << "\n";
    if (r.aligned_period)
        std::cout << "aligned     pre-state at " << *r.aligned_transient + *r.aligned_period << " repeats "
                  << *r.aligned_transient << "\n";
    if (r.first_miss)
        std::cout << "first miss  task " << r.first_miss->task << " job " << r.first_miss->job << " at "
                  << r.first_miss->tick << "\n";
    if (r.feasible)
        std::cout << "steady idle " << steady_idle_count(sys, run.trace, r) << " processor-ticks per period\n";

    if (!a.trace.empty())
        write_file(a.trace, trace_to_csv(run.trace));
    if (!a.events.empty())
        write_file(a.events, events_to_csv(run.trace.events));
    if (!a.report.empty())
        write_file(a.report, emit_report(r));
    if (!a.svg.empty())
        write_file(a.svg, render_gantt_svg(run.trace, r));
    if (a.gantt)
        std::cout << "\n" << render_gantt(run.trace, r);

    switch (r.verdict) {
    case Verdict::cycle_found:
        return ok;
    case Verdict::miss_found:
        return miss;
    case Verdict::horizon_exhausted:
        return exhausted;
    }
    return failure;
}

int run_enumerate(const std::string &path, std::optional<Tick> depth, const std::string &dot, bool verify) {
    const TaskSystem sys = load_system(path);
    print_warnings(sys);
    GraphOptions opts;
    opts.depth = depth;
    const ScheduleGraph g = build_graph(sys, opts);
    std::cout << "vertices    " << g.vertices.size() << " (" << g.survivor_count() << " on feasible schedules)\n"
              << "complete    " << (g.complete ? "yes" : "no (depth limit reached)") << "\n";
    if (!dot.empty())
        write_file(dot, export_graph(g));
    if (!g.complete) {
        if (verify)
            std::cerr << "error: the bound can only be verified on a complete graph; drop --depth\n";
        return verify ? failure : ok;
    }
    const ExtremalCycles x = extremal_cycles(g);
    if (x.lassos_examined == 0) {
        std::cout << "no feasible schedule exists\n";
        return miss;
    }
    std::cout << "max cycle     " << x.max_cycle_len << "\n"
              << "max transient " << x.max_transient_len << "\n"
              << "max revisit   " << x.max_revisit << "\n";
    if (verify) {
        const Tick bound = general_product_bound(sys);
        const BoundCheck c = verify_bound(g, bound);
        if (c.holds) {
            std::cout << "bound " << bound << " holds for every memoryless schedule\n";
        } else {
            std::cout << "bound " << bound << " VIOLATED: transient " << c.counterexample->transient << ", period "
                      << c.counterexample->period << "\n";
            return failure;
        }
    }
    return ok;
}

int run_gantt(const std::string &trace_path, const std::string &events, const std::string &report,
              const std::string &svg) {
    ScheduleTrace trace = parse_trace_csv(read_file(trace_path));
    if (!events.empty())
        trace.events = parse_events_csv(read_file(events));
    std::optional<CycleReport> r;
    if (!report.empty())
        r = parse_cycle_report(read_file(report));
    if (!svg.empty())
        write_file(svg, render_gantt_svg(trace, r));
    else
        std::cout << render_gantt(trace, r);
    return ok;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Cycle detection and simulation-interval bounds for periodic task systems"};
    app.require_subcommand(1);

    std::string system_path;
    std::vector<TaskId> order;
    bool as_json = false;
    auto *bounds = app.add_subcommand("bounds", "Print simulation-interval bounds");
    bounds->add_option("system", system_path, "Task system JSON")->required();
    bounds->add_option("--priority-order", order, "Task ids, highest priority first")->delimiter(',');
    bounds->add_flag("--json", as_json, "Emit the report as JSON");

    SimulateArgs sim;
    Tick horizon = 0;
    auto *simulate = app.add_subcommand("simulate", "Simulate a scheduler until its schedule repeats");
    simulate->add_option("system", sim.system, "Task system JSON")->required();
    simulate->add_option("--scheduler", sim.scheduler, "edf|lrptf|fpp:rm|fpp:dm|fpp:explicit|table:<file>");
    auto *horizon_opt = simulate->add_option("--horizon", horizon, "Last tick to simulate")->check(CLI::NonNegativeNumber);
    simulate->add_flag("--stop-on-miss", sim.stop_on_miss, "Stop at the first deadline miss");
    simulate->add_option("--trace", sim.trace, "Write the trace CSV");
    simulate->add_option("--events", sim.events, "Write the events CSV");
    simulate->add_option("--report", sim.report, "Write the cycle report JSON");
    simulate->add_flag("--gantt", sim.gantt, "Print a text Gantt chart");
    simulate->add_option("--svg", sim.svg, "Write an SVG Gantt chart");

    std::string enum_path, dot;
    Tick depth = 0;
    bool verify = false;
    auto *enumerate = app.add_subcommand("enumerate", "Explore every schedule of a small system");
    enumerate->add_option("system", enum_path, "Task system JSON")->required();
    auto *depth_opt = enumerate->add_option("--depth", depth, "Stop expanding at this tick")->check(CLI::NonNegativeNumber);
    enumerate->add_option("--dot", dot, "Write the schedule graph as Graphviz DOT");
    enumerate->add_flag("--verify-bound", verify, "Check the product bound against every memoryless schedule");

    std::string trace_path, events_path, report_path, svg_path;
    auto *gantt = app.add_subcommand("gantt", "Render a saved trace");
    gantt->add_option("trace", trace_path, "Trace CSV")->required();
    gantt->add_option("--events", events_path, "Events CSV");
    gantt->add_option("--report", report_path, "Cycle report JSON");
    gantt->add_option("--svg", svg_path, "Write SVG instead of text");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? ok : bad_input;
    }

    try {
        if (*bounds)
            return run_bounds(system_path, order, as_json);
        if (*simulate) {
            if (*horizon_opt)
                sim.horizon = horizon;
            return run_simulate(sim);
        }
        if (*enumerate)
            return run_enumerate(enum_path, *depth_opt ? std::optional<Tick>(depth) : std::nullopt, dot, verify);
        if (*gantt)
            return run_gantt(trace_path, events_path, report_path, svg_path);
    } catch (const InputError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return bad_input;
    } catch (const ConfigError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return bad_input;
    } catch (const InvalidTrace &e) {
        std::cerr << "error: " << e.what() << "\n";
        return bad_input;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return failure;
    }
    return failure;
}
