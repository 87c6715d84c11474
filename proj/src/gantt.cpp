#include "schedcycle/gantt.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace schedcycle {

namespace {

TaskId max_task(const ScheduleTrace &trace) {
    TaskId top = 0;
    for (const auto &row : trace.assignment)
        for (TaskId id : row)
            top = std::max(top, id);
    for (const TraceEvent &e : trace.events)
        top = std::max(top, e.task);
    return top;
}

// marker[task][tick] over ticks 0..horizon inclusive.
std::map<TaskId, std::string> task_markers(const ScheduleTrace &trace) {
    const auto width = static_cast<std::size_t>(trace.horizon() + 1);
    std::map<TaskId, std::string> rows;
    for (TaskId id = 1; id <= max_task(trace); ++id)
        rows[id] = std::string(width, '.');
    for (const TraceEvent &e : trace.events) {
        if (e.tick < 0 || e.tick > trace.horizon())
            continue;
        char &c = rows[e.task][static_cast<std::size_t>(e.tick)];
        switch (e.kind) {
        case TraceEvent::Kind::miss:
            c = 'X';
            break;
        case TraceEvent::Kind::release:
            if (c != 'X')
                c = (c == 'd' || c == 'b') ? 'b' : 'r';
            break;
        case TraceEvent::Kind::deadline:
            if (c != 'X')
                c = (c == 'r' || c == 'b') ? 'b' : 'd';
            break;
        case TraceEvent::Kind::completion:
            break;
        }
    }
    return rows;
}

std::vector<Tick> steady_marks(const ScheduleTrace &trace, const std::optional<CycleReport> &report) {
    std::vector<Tick> marks;
    if (!report || !report->transient_len || !report->period_len || *report->period_len <= 0)
        return marks;
    for (Tick t = *report->transient_len; t <= trace.horizon(); t += *report->period_len)
        marks.push_back(t);
    return marks;
}

} // namespace

std::string render_gantt(const ScheduleTrace &trace, const std::optional<CycleReport> &report) {
    const Tick n = trace.horizon();
    const int w = static_cast<int>(std::to_string(std::max<TaskId>(1, max_task(trace))).size());
    std::ostringstream os;
    os << "schedule: " << trace.processors << " processor" << (trace.processors == 1 ? "" : "s") << ", " << n
       << " tick" << (n == 1 ? "" : "s") << "\n";
    if (n == 0)
        return os.str();

    auto label = [&](const std::string &s) {
        std::string l = s;
        l.resize(std::max<std::size_t>(8, s.size() + 1), ' ');
        os << l;
    };
    auto cell = [&](const std::string &s) {
        os << std::string(static_cast<std::size_t>(w) - std::min(s.size(), static_cast<std::size_t>(w)), ' ') << s;
    };

    // Tick ruler: the tick number above every tenth column.
    label("tick");
    for (Tick t = 0; t <= n; ++t)
        cell(t % 10 == 0 ? std::to_string(t / 10 % 10) : (t % 5 == 0 ? "+" : ""));
    os << "\n";
    label("");
    for (Tick t = 0; t <= n; ++t)
        cell(std::to_string(t % 10));
    os << "\n";

    for (int c = 0; c < trace.processors; ++c) {
        label("cpu" + std::to_string(c));
        for (Tick t = 0; t < n; ++t) {
            const auto &row = trace.assignment[static_cast<std::size_t>(t)];
            cell(static_cast<std::size_t>(c) < row.size() ? std::to_string(row[static_cast<std::size_t>(c)]) : "-");
        }
        os << "\n";
    }
    for (const auto &[id, markers] : task_markers(trace)) {
        label("t" + std::to_string(id));
        for (char m : markers)
            cell(std::string(1, m));
        os << "\n";
    }
    const auto marks = steady_marks(trace, report);
    if (!marks.empty()) {
        label("steady");
        for (Tick t = 0; t <= n; ++t) {
            if (t == marks.front())
                cell("[");
            else if (std::find(marks.begin(), marks.end(), t) != marks.end())
                cell("|");
            else
                cell(t > marks.front() ? "=" : " ");
        }
        os << "\n";
    }
    return os.str();
}

std::string render_gantt_svg(const ScheduleTrace &trace, const std::optional<CycleReport> &report) {
    static const char *palette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};
    const Tick n = trace.horizon();
    const int cw = 24, rh = 24, left = 56, top = 28;
    const auto markers = task_markers(trace);
    const int rows = trace.processors + static_cast<int>(markers.size());
    const long width = left + cw * (n + 1) + 8;
    const long height = top + rh * rows + 16;

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"monospace\" font-size=\"11\">\n";
    os << "<text x=\"4\" y=\"14\">schedule: " << trace.processors << " processors, " << n << " ticks</text>\n";
    if (n == 0) {
        os << "</svg>\n";
        return os.str();
    }
    for (Tick t = 0; t <= n; ++t)
        if (t % 5 == 0)
            os << "<text x=\"" << left + cw * t - 3 << "\" y=\"" << top - 4 << "\">" << t << "</text>\n";

    for (int c = 0; c < trace.processors; ++c) {
        const int y = top + rh * c;
        os << "<text x=\"4\" y=\"" << y + 16 << "\">cpu" << c << "</text>\n";
        for (Tick t = 0; t < n; ++t) {
            const auto &row = trace.assignment[static_cast<std::size_t>(t)];
            const long x = left + cw * t;
            if (static_cast<std::size_t>(c) >= row.size()) {
                os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cw << "\" height=\"" << rh - 4
                   << "\" fill=\"none\" stroke=\"#ddd\"/>\n";
                continue;
            }
            const TaskId id = row[static_cast<std::size_t>(c)];
            os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cw << "\" height=\"" << rh - 4
               << "\" fill=\"" << palette[static_cast<std::size_t>(id - 1) % 10] << "\" stroke=\"#333\"/>\n";
            os << "<text x=\"" << x + 8 << "\" y=\"" << y + 14 << "\" fill=\"#fff\">" << id << "</text>\n";
        }
    }
    int r = trace.processors;
    for (const auto &[id, row] : markers) {
        const int y = top + rh * r++;
        os << "<text x=\"4\" y=\"" << y + 16 << "\">t" << id << "</text>\n";
        for (std::size_t t = 0; t < row.size(); ++t) {
            const long x = left + cw * static_cast<long>(t);
            switch (row[t]) {
            case 'r':
                os << "<path d=\"M" << x << " " << y + 20 << " V" << y + 4 << " l-4 6 m4 -6 l4 6\" stroke=\"#333\" fill=\"none\"/>\n";
                break;
            case 'd':
                os << "<path d=\"M" << x << " " << y + 4 << " V" << y + 20 << " l-4 -6 m4 6 l4 -6\" stroke=\"#333\" fill=\"none\"/>\n";
                break;
            case 'b':
                os << "<path d=\"M" << x << " " << y + 4 << " V" << y + 20 << "\" stroke=\"#333\"/>\n";
                os << "<circle cx=\"" << x << "\" cy=\"" << y + 12 << "\" r=\"3\" fill=\"#333\"/>\n";
                break;
            case 'X':
                os << "<text x=\"" << x - 4 << "\" y=\"" << y + 16 << "\" fill=\"#d00\" font-weight=\"bold\">X</text>\n";
                break;
            default:
                break;
            }
        }
    }
    for (Tick t : steady_marks(trace, report))
        os << "<line x1=\"" << left + cw * t << "\" y1=\"" << top - 2 << "\" x2=\"" << left + cw * t << "\" y2=\""
           << top + rh * rows << "\" stroke=\"#d00\" stroke-dasharray=\"4 3\"/>\n";
    os << "</svg>\n";
    return os.str();
}

} // namespace schedcycle
