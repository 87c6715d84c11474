#pragma once

#include "schedcycle/cycle_detect.hpp"

#include <optional>
#include <string>

namespace schedcycle {

/// Text Gantt chart: one row per processor, one column per tick, then one
/// marker row per task (r = release, d = deadline, b = both, X = miss) and,
/// when a report is given, a row marking the start of the steady phase and
/// each period boundary after it.
std::string render_gantt(const ScheduleTrace &trace, const std::optional<CycleReport> &report = std::nullopt);

std::string render_gantt_svg(const ScheduleTrace &trace, const std::optional<CycleReport> &report = std::nullopt);

} // namespace schedcycle
