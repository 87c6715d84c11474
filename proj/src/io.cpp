#include "schedcycle/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace schedcycle {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string &path, const std::string &contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError("cannot write '" + path + "'");
    out << contents;
    if (!out)
        throw InputError("error writing '" + path + "'");
}

namespace {

json parse_json(const std::string &text, const std::string &origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        // Translate the byte offset into line:column.
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string what = e.what();
        auto colon = what.find(": ", what.find("parse error"));
        throw InputError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON" +
                         (colon == std::string::npos ? std::string() : what.substr(colon)));
    }
}

struct Fields {
    const json &obj;
    std::string path;

    Fields(const json &o, std::string p, std::initializer_list<const char *> allowed) : obj(o), path(std::move(p)) {
        if (!obj.is_object())
            throw InputError(path + ": expected an object");
        std::set<std::string> ok(allowed.begin(), allowed.end());
        for (auto it = obj.begin(); it != obj.end(); ++it)
            if (!ok.count(it.key()))
                throw InputError(path + ": unknown field '" + it.key() + "'");
    }

    bool has(const char *key) const { return obj.contains(key); }

    const json &at(const char *key) const {
        auto it = obj.find(key);
        if (it == obj.end())
            throw InputError(path + ": missing field '" + key + "'");
        return *it;
    }

    std::string field(const char *key) const { return path + "." + key; }

    Tick integer(const char *key) const {
        const json &v = at(key);
        if (!v.is_number_integer())
            throw InputError(field(key) + ": expected an integer");
        if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
            throw InputError(field(key) + ": value out of range");
        return v.get<Tick>();
    }

    int small_integer(const char *key) const {
        Tick v = integer(key);
        if (v < INT32_MIN || v > INT32_MAX)
            throw InputError(field(key) + ": value out of range");
        return static_cast<int>(v);
    }

    std::string string(const char *key) const {
        const json &v = at(key);
        if (!v.is_string())
            throw InputError(field(key) + ": expected a string");
        return v.get<std::string>();
    }
};

StructuralConstraint parse_constraint(const json &c, const std::string &path) {
    if (!c.is_object() || !c.contains("kind") || !c["kind"].is_string())
        throw InputError(path + ": expected an object with a string field 'kind'");
    const std::string kind = c["kind"].get<std::string>();
    if (kind == "precedes") {
        Fields f(c, path, {"kind", "producer", "consumer"});
        return StructuralConstraint::precedes(f.small_integer("producer"), f.small_integer("consumer"));
    }
    if (kind == "excludes") {
        Fields f(c, path, {"kind", "a", "b"});
        return StructuralConstraint::excludes(f.small_integer("a"), f.small_integer("b"));
    }
    if (kind == "suspends") {
        Fields f(c, path, {"kind", "task", "after", "delay"});
        return StructuralConstraint::suspends(f.small_integer("task"), f.integer("after"), f.integer("delay"));
    }
    if (kind == "non_preemptive") {
        Fields f(c, path, {"kind", "task"});
        return StructuralConstraint::non_preemptive(f.small_integer("task"));
    }
    throw InputError(path + ".kind: unknown constraint kind '" + kind +
                     "' (expected precedes|excludes|suspends|non_preemptive)");
}

ojson constraint_json(const StructuralConstraint &c) {
    ojson j;
    j["kind"] = to_string(c.kind);
    switch (c.kind) {
    case ConstraintKind::precedes:
        j["producer"] = c.first;
        j["consumer"] = c.second;
        break;
    case ConstraintKind::excludes:
        j["a"] = c.first;
        j["b"] = c.second;
        break;
    case ConstraintKind::suspends:
        j["task"] = c.first;
        j["after"] = c.after;
        j["delay"] = c.delay;
        break;
    case ConstraintKind::non_preemptive:
        j["task"] = c.first;
        break;
    }
    return j;
}

} // namespace

TaskSystem parse_system(const std::string &json_text, const std::string &origin) {
    const json doc = parse_json(json_text, origin);
    Fields top(doc, origin, {"processors", "tasks", "constraints"});
    TaskSystem sys;
    sys.processors = top.small_integer("processors");

    const json &tasks = top.at("tasks");
    if (!tasks.is_array())
        throw InputError(top.field("tasks") + ": expected an array");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        Fields f(tasks[i], origin + ".tasks[" + std::to_string(i) + "]",
                 {"id", "offset", "wcet", "period", "deadline", "priority"});
        Task t;
        t.id = f.small_integer("id");
        t.offset = f.integer("offset");
        t.wcet = f.integer("wcet");
        t.period = f.integer("period");
        t.deadline = f.integer("deadline");
        if (f.has("priority"))
            t.priority = f.small_integer("priority");
        sys.tasks.push_back(t);
    }
    std::stable_sort(sys.tasks.begin(), sys.tasks.end(), [](const Task &a, const Task &b) { return a.id < b.id; });

    if (top.has("constraints")) {
        const json &cs = top.at("constraints");
        if (!cs.is_array())
            throw InputError(top.field("constraints") + ": expected an array");
        for (std::size_t i = 0; i < cs.size(); ++i)
            sys.constraints.push_back(parse_constraint(cs[i], origin + ".constraints[" + std::to_string(i) + "]"));
    }

    std::string errors;
    for (const Diagnostic &d : validate(sys))
        if (d.is_error())
            errors += (errors.empty() ? "" : "; ") + d.message;
    if (!errors.empty())
        throw InputError(origin + ": invalid task system: " + errors);
    return sys;
}

TaskSystem load_system(const std::string &path) { return parse_system(read_file(path), path); }

std::string system_to_json(const TaskSystem &system) {
    ojson j;
    j["processors"] = system.processors;
    j["tasks"] = ojson::array();
    for (const Task &t : system.tasks) {
        ojson tj;
        tj["id"] = t.id;
        tj["offset"] = t.offset;
        tj["wcet"] = t.wcet;
        tj["period"] = t.period;
        tj["deadline"] = t.deadline;
        if (t.priority)
            tj["priority"] = *t.priority;
        j["tasks"].push_back(tj);
    }
    j["constraints"] = ojson::array();
    for (const StructuralConstraint &c : system.constraints)
        j["constraints"].push_back(constraint_json(c));
    return j.dump(2) + "\n";
}

// --------------------------------------------------------------- reports

namespace {

template <typename T> ojson opt(const std::optional<T> &v) {
    return v ? ojson(*v) : ojson(nullptr);
}

ojson bound_json(const BoundValue &b) {
    ojson j;
    j["value"] = opt(b.value);
    j["note"] = b.note;
    return j;
}

void check_schema(const json &doc, const char *kind) {
    if (!doc.is_object() || !doc.contains("schema") || doc["schema"] != 1)
        throw InputError("report: unsupported or missing schema version (expected 1)");
    if (!doc.contains("kind") || doc["kind"] != kind)
        throw InputError(std::string("report: expected kind '") + kind + "'");
}

std::optional<Tick> opt_tick(const json &doc, const char *key) {
    const json &v = doc.at(key);
    if (v.is_null())
        return std::nullopt;
    return v.get<Tick>();
}

BoundValue parse_bound(const json &j) { return {j.at("value").is_null() ? std::nullopt : std::optional<Tick>(j.at("value").get<Tick>()), j.at("note").get<std::string>()}; }

template <typename F> auto report_guard(F &&f) {
    try {
        return f();
    } catch (const json::exception &e) {
        throw InputError(std::string("report: ") + e.what());
    }
}

} // namespace

std::string emit_report(const CycleReport &r) {
    ojson j;
    j["schema"] = 1;
    j["kind"] = "cycle_report";
    j["verdict"] = to_string(r.verdict);
    j["feasible"] = r.feasible;
    j["transient_len"] = opt(r.transient_len);
    j["period_len"] = opt(r.period_len);
    if (r.first_miss) {
        ojson m;
        m["task"] = r.first_miss->task;
        m["job"] = r.first_miss->job;
        m["tick"] = r.first_miss->tick;
        j["first_miss"] = m;
    } else {
        j["first_miss"] = nullptr;
    }
    j["bound_used"] = r.bound_used;
    j["aligned_transient"] = opt(r.aligned_transient);
    j["aligned_period"] = opt(r.aligned_period);
    return j.dump(2) + "\n";
}

std::string emit_report(const BoundsReport &r) {
    ojson j;
    j["schema"] = 1;
    j["kind"] = "bounds_report";
    j["hyperperiod"] = r.hyperperiod;
    j["leung"] = bound_json(r.leung);
    j["sn"] = bound_json(r.sn);
    j["sn_interval_end"] = bound_json(r.sn_interval_end);
    j["sn_hat"] = bound_json(r.sn_hat);
    j["sn_hat_interval_end"] = bound_json(r.sn_hat_interval_end);
    j["sync_product_end"] = r.sync_product_end;
    j["general_product_end"] = r.general_product_end;
    j["best"] = r.best;
    j["best_source"] = r.best_source;
    j["applicability_notes"] = r.applicability_notes;
    return j.dump(2) + "\n";
}

CycleReport parse_cycle_report(const std::string &json_text) {
    const json doc = parse_json(json_text, "report");
    check_schema(doc, "cycle_report");
    return report_guard([&] {
        CycleReport r;
        r.verdict = parse_verdict(doc.at("verdict").get<std::string>());
        r.feasible = doc.at("feasible").get<bool>();
        r.transient_len = opt_tick(doc, "transient_len");
        r.period_len = opt_tick(doc, "period_len");
        if (!doc.at("first_miss").is_null()) {
            const json &m = doc["first_miss"];
            r.first_miss = JobMiss{m.at("task").get<TaskId>(), m.at("job").get<Tick>(), m.at("tick").get<Tick>()};
        }
        r.bound_used = doc.at("bound_used").get<Tick>();
        r.aligned_transient = opt_tick(doc, "aligned_transient");
        r.aligned_period = opt_tick(doc, "aligned_period");
        return r;
    });
}

BoundsReport parse_bounds_report(const std::string &json_text) {
    const json doc = parse_json(json_text, "report");
    check_schema(doc, "bounds_report");
    return report_guard([&] {
        BoundsReport r;
        r.hyperperiod = doc.at("hyperperiod").get<Tick>();
        r.leung = parse_bound(doc.at("leung"));
        r.sn = parse_bound(doc.at("sn"));
        r.sn_interval_end = parse_bound(doc.at("sn_interval_end"));
        r.sn_hat = parse_bound(doc.at("sn_hat"));
        r.sn_hat_interval_end = parse_bound(doc.at("sn_hat_interval_end"));
        r.sync_product_end = doc.at("sync_product_end").get<Tick>();
        r.general_product_end = doc.at("general_product_end").get<Tick>();
        r.best = doc.at("best").get<Tick>();
        r.best_source = doc.at("best_source").get<std::string>();
        r.applicability_notes = doc.at("applicability_notes").get<std::vector<std::string>>();
        return r;
    });
}

// ------------------------------------------------------------------- CSV

namespace {

std::vector<std::string> split(const std::string &line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, sep))
        out.push_back(cell);
    if (!line.empty() && line.back() == sep)
        out.emplace_back();
    return out;
}

std::vector<std::string> lines_of(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (!line.empty())
            out.push_back(line);
    }
    return out;
}

Tick parse_int(const std::string &s, const std::string &where) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception &) {
        throw InputError(where + ": expected an integer, got '" + s + "'");
    }
}

} // namespace

std::string trace_to_csv(const ScheduleTrace &trace) {
    std::ostringstream os;
    os << "tick";
    for (int c = 0; c < trace.processors; ++c)
        os << ",cpu" << c;
    os << "\n";
    for (Tick t = 0; t < trace.horizon(); ++t) {
        const auto &row = trace.assignment[static_cast<std::size_t>(t)];
        os << t;
        for (int c = 0; c < trace.processors; ++c) {
            os << ",";
            if (static_cast<std::size_t>(c) < row.size())
                os << row[static_cast<std::size_t>(c)];
            else
                os << "-";
        }
        os << "\n";
    }
    return os.str();
}

ScheduleTrace parse_trace_csv(const std::string &csv) {
    const auto lines = lines_of(csv);
    if (lines.empty())
        throw InputError("trace CSV: missing header");
    const auto header = split(lines[0], ',');
    if (header.empty() || header[0] != "tick")
        throw InputError("trace CSV line 1: header must start with 'tick'");
    for (std::size_t c = 1; c < header.size(); ++c)
        if (header[c] != "cpu" + std::to_string(c - 1))
            throw InputError("trace CSV line 1: expected column 'cpu" + std::to_string(c - 1) + "'");
    ScheduleTrace trace;
    trace.processors = static_cast<int>(header.size()) - 1;
    if (trace.processors < 1)
        throw InputError("trace CSV line 1: no processor columns");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string where = "trace CSV line " + std::to_string(i + 1);
        const auto cells = split(lines[i], ',');
        if (cells.size() != header.size())
            throw InputError(where + ": expected " + std::to_string(header.size()) + " cells");
        if (parse_int(cells[0], where) != static_cast<Tick>(i - 1))
            throw InputError(where + ": ticks must be consecutive from 0");
        std::vector<TaskId> row;
        for (std::size_t c = 1; c < cells.size(); ++c)
            if (cells[c] != "-")
                row.push_back(static_cast<TaskId>(parse_int(cells[c], where)));
        std::sort(row.begin(), row.end());
        if (std::adjacent_find(row.begin(), row.end()) != row.end())
            throw InputError(where + ": a task runs on two processors at once");
        trace.assignment.push_back(std::move(row));
    }
    return trace;
}

std::string events_to_csv(const std::vector<TraceEvent> &events) {
    std::ostringstream os;
    os << "kind,task,job,tick\n";
    for (const TraceEvent &e : events)
        os << to_string(e.kind) << "," << e.task << "," << e.job << "," << e.tick << "\n";
    return os.str();
}

std::vector<TraceEvent> parse_events_csv(const std::string &csv) {
    const auto lines = lines_of(csv);
    if (lines.empty() || lines[0] != "kind,task,job,tick")
        throw InputError("events CSV line 1: expected header 'kind,task,job,tick'");
    std::vector<TraceEvent> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string where = "events CSV line " + std::to_string(i + 1);
        const auto cells = split(lines[i], ',');
        if (cells.size() != 4)
            throw InputError(where + ": expected 4 cells");
        TraceEvent e;
        if (cells[0] == "release")
            e.kind = TraceEvent::Kind::release;
        else if (cells[0] == "deadline")
            e.kind = TraceEvent::Kind::deadline;
        else if (cells[0] == "completion")
            e.kind = TraceEvent::Kind::completion;
        else if (cells[0] == "miss")
            e.kind = TraceEvent::Kind::miss;
        else
            throw InputError(where + ": unknown event kind '" + cells[0] + "'");
        e.task = static_cast<TaskId>(parse_int(cells[1], where));
        e.job = parse_int(cells[2], where);
        e.tick = parse_int(cells[3], where);
        out.push_back(e);
    }
    return out;
}

// ---------------------------------------------------------------- tables

std::string table_to_json(const std::map<std::string, Decision> &table) {
    ojson j = ojson::array();
    for (const auto &[key, decision] : table) {
        ojson e;
        e["state"] = to_hex(key);
        e["decision"] = decision;
        j.push_back(e);
    }
    return j.dump(2) + "\n";
}

std::map<std::string, Decision> parse_table(const std::string &json_text) {
    const json doc = parse_json(json_text, "table");
    if (!doc.is_array())
        throw InputError("table: expected an array of {state, decision} entries");
    std::map<std::string, Decision> table;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const std::string path = "table[" + std::to_string(i) + "]";
        Fields f(doc[i], path, {"state", "decision"});
        std::string key = from_hex(f.string("state"));
        (void)decode_state_key(key);
        const json &d = f.at("decision");
        if (!d.is_array())
            throw InputError(f.field("decision") + ": expected an array of task ids");
        Decision decision;
        for (const json &id : d) {
            if (!id.is_number_integer())
                throw InputError(f.field("decision") + ": expected an array of task ids");
            decision.push_back(id.get<TaskId>());
        }
        std::sort(decision.begin(), decision.end());
        if (!table.emplace(std::move(key), std::move(decision)).second)
            throw InputError(path + ": duplicate state");
    }
    return table;
}

SchedulerSpec load_scheduler(const std::string &name) {
    const std::string prefix = "table:";
    if (name.rfind(prefix, 0) == 0)
        return SchedulerSpec::table_driven(parse_table(read_file(name.substr(prefix.size()))));
    return parse_scheduler_name(name);
}

} // namespace schedcycle
