#pragma once

#include "schedcycle/bounds.hpp"
#include "schedcycle/cycle_detect.hpp"

#include <map>
#include <string>

namespace schedcycle {

std::string read_file(const std::string &path);
void write_file(const std::string &path, const std::string &contents);

// Task-system JSON. Unknown keys, missing fields and validation errors raise
// InputError with the offending field path (or line and column for syntax
// errors). Warnings are left to validate().
TaskSystem parse_system(const std::string &json_text, const std::string &origin = "<input>");
TaskSystem load_system(const std::string &path);
std::string system_to_json(const TaskSystem &system);

std::string emit_report(const CycleReport &report);
std::string emit_report(const BoundsReport &report);
CycleReport parse_cycle_report(const std::string &json_text);
BoundsReport parse_bounds_report(const std::string &json_text);

// tick,cpu0,cpu1,... with '-' for an idle processor.
std::string trace_to_csv(const ScheduleTrace &trace);
ScheduleTrace parse_trace_csv(const std::string &csv);
// kind,task,job,tick
std::string events_to_csv(const std::vector<TraceEvent> &events);
std::vector<TraceEvent> parse_events_csv(const std::string &csv);

// Table-driven scheduler files: [{"state": "<hex key>", "decision": [ids]}].
std::string table_to_json(const std::map<std::string, Decision> &table);
std::map<std::string, Decision> parse_table(const std::string &json_text);

// edf | lrptf | fpp:rm | fpp:dm | fpp:explicit | table:<file>
SchedulerSpec load_scheduler(const std::string &name);

} // namespace schedcycle
