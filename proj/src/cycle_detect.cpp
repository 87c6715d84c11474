#include "schedcycle/cycle_detect.hpp"

#include "schedcycle/bounds.hpp"

#include <unordered_map>

namespace schedcycle {

// ------------------------------------------------------------ state keys
//
// Layout: for each of the four state vectors, a one-byte tag, a 4-byte
// length, then every value as 8 little-endian bytes.

namespace {

void put_u32(std::string &out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b)
        out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

void put_i64(std::string &out, Tick v) {
    auto u = static_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b)
        out.push_back(static_cast<char>((u >> (8 * b)) & 0xff));
}

void put_section(std::string &out, char tag, const std::vector<Tick> &values) {
    out.push_back(tag);
    put_u32(out, static_cast<std::uint32_t>(values.size()));
    for (Tick v : values)
        put_i64(out, v);
}

struct Reader {
    const std::string &in;
    std::size_t pos = 0;

    std::uint64_t take(int bytes) {
        if (pos + static_cast<std::size_t>(bytes) > in.size())
            throw InputError("truncated state key");
        std::uint64_t v = 0;
        for (int b = 0; b < bytes; ++b)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos++])) << (8 * b);
        return v;
    }

    std::vector<Tick> section(char tag) {
        if (pos >= in.size() || in[pos] != tag)
            throw InputError(std::string("state key: expected section '") + tag + "'");
        ++pos;
        auto n = static_cast<std::size_t>(take(4));
        if (n > in.size())
            throw InputError("state key: bad section length");
        std::vector<Tick> v(n);
        for (Tick &x : v)
            x = static_cast<Tick>(take(8));
        return v;
    }
};

} // namespace

std::string canonical_state_key(const SystemState &state) {
    std::string out;
    out.reserve(4 * 5 + 8 * (state.remaining.size() * 2 + state.suspension.size() + state.precedence_gap.size()));
    put_section(out, 'R', state.remaining);
    put_section(out, 'C', state.clocks);
    put_section(out, 'S', state.suspension);
    put_section(out, 'P', state.precedence_gap);
    return out;
}

SystemState decode_state_key(const std::string &key) {
    Reader r{key};
    SystemState s;
    s.remaining = r.section('R');
    s.clocks = r.section('C');
    s.suspension = r.section('S');
    s.precedence_gap = r.section('P');
    if (r.pos != key.size())
        throw InputError("state key: trailing bytes");
    if (s.remaining.size() != s.clocks.size())
        throw InputError("state key: remaining/clock length mismatch");
    return s;
}

std::string to_hex(const std::string &bytes) {
    static const char *digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (unsigned char c : bytes) {
        out.push_back(digits[c >> 4]);
        out.push_back(digits[c & 0xf]);
    }
    return out;
}

std::string from_hex(const std::string &hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9')
            return c - '0';
        if (c >= 'a' && c <= 'f')
            return c - 'a' + 10;
        if (c >= 'A' && c <= 'F')
            return c - 'A' + 10;
        throw InputError(std::string("invalid hex digit '") + c + "'");
    };
    if (hex.size() % 2 != 0)
        throw InputError("hex string has odd length");
    std::string out;
    for (std::size_t i = 0; i < hex.size(); i += 2)
        out.push_back(static_cast<char>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
    return out;
}

// ------------------------------------------------------- cycle detection

const char *to_string(Verdict v) {
    switch (v) {
    case Verdict::cycle_found:
        return "cycle_found";
    case Verdict::miss_found:
        return "miss_found";
    case Verdict::horizon_exhausted:
        return "horizon_exhausted";
    }
    return "?";
}

Verdict parse_verdict(const std::string &s) {
    if (s == "cycle_found")
        return Verdict::cycle_found;
    if (s == "miss_found")
        return Verdict::miss_found;
    if (s == "horizon_exhausted")
        return Verdict::horizon_exhausted;
    throw InputError("unknown verdict '" + s + "'");
}

Tick default_horizon(const TaskSystem &system) {
    return checked_add(general_product_bound(system), hyperperiod(system), "default horizon");
}

namespace {

std::string pre_state_key(const TaskSystem &system, const SystemState &state) {
    PreState p = pre_state(system, state);
    SystemState view = state;
    view.remaining = std::move(p.remaining);
    return canonical_state_key(view);
}

} // namespace

CycleRun run_cycle_detection(const TaskSystem &system, const SchedulerSpec &spec, const CycleOptions &options) {
    require_valid(system);
    require_compatible(spec, system);

    CycleRun run;
    CycleReport &rep = run.report;
    rep.bound_used = options.horizon ? *options.horizon : default_horizon(system);
    const Tick h = hyperperiod(system);
    const bool synchronous = is_synchronous(system);

    Simulation sim(system);
    std::unordered_map<std::string, Tick> first_seen;
    std::unordered_map<std::string, Tick> aligned_seen;
    std::optional<Tick> stop_at;

    for (;;) {
        const Tick t = sim.now();
        if (synchronous && t % h == 0 && !rep.aligned_period) {
            auto [it, fresh] = aligned_seen.emplace(pre_state_key(system, sim.state()), t);
            if (!fresh) {
                rep.aligned_transient = it->second;
                rep.aligned_period = t - it->second;
            }
        }
        if (!rep.period_len) {
            auto [it, fresh] = first_seen.emplace(canonical_state_key(sim.state()), t);
            if (!fresh) {
                rep.transient_len = it->second;
                rep.period_len = t - it->second;
                first_seen.clear();
                stop_at = options.extend_trace ? t + *rep.period_len : t;
            }
        }
        if (stop_at && t >= *stop_at && (!synchronous || rep.aligned_period || t >= *stop_at + 2 * h))
            break;
        if (!rep.period_len) {
            if (options.stop_on_miss && !sim.misses().empty())
                break;
            if (t >= rep.bound_used)
                break;
        }
        sim.advance(decide(spec, system, sim.state(), t, sim.eligible()));
    }

    // Misses after the revisit tick repeat earlier ones and are not reported first.
    if (auto miss = sim.first_miss())
        rep.first_miss = miss;
    if (rep.first_miss)
        rep.verdict = Verdict::miss_found;
    else if (rep.period_len)
        rep.verdict = Verdict::cycle_found;
    else
        rep.verdict = Verdict::horizon_exhausted;
    rep.feasible = rep.verdict == Verdict::cycle_found;
    run.trace = sim.take_trace();
    return run;
}

CycleReport find_cycle(const TaskSystem &system, const SchedulerSpec &spec, std::optional<Tick> horizon) {
    CycleOptions opts;
    opts.horizon = horizon;
    opts.extend_trace = false;
    return run_cycle_detection(system, spec, opts).report;
}

Tick steady_idle_count(const TaskSystem &system, const ScheduleTrace &trace, const CycleReport &report) {
    if (!report.feasible || !report.transient_len || !report.period_len)
        throw InvariantViolation("steady idle count requires a feasible closed cycle");
    const Tick begin = *report.transient_len;
    const Tick end = begin + *report.period_len;
    if (end > trace.horizon())
        throw InvariantViolation("trace ends at " + std::to_string(trace.horizon()) + ", before the steady window [" +
                                 std::to_string(begin) + ", " + std::to_string(end) + ")");
    Tick idle = 0;
    for (Tick t = begin; t < end; ++t)
        idle += trace.processors - static_cast<Tick>(trace.assignment[static_cast<std::size_t>(t)].size());

    const Rational expected = Rational(*report.period_len) * (Rational(system.processors) - utilization(system));
    if (Rational(idle) != expected)
        throw InvariantViolation("steady window [" + std::to_string(begin) + ", " + std::to_string(end) + ") has " +
                                 std::to_string(idle) + " idle processor-ticks, expected " + expected.str());
    return idle;
}

} // namespace schedcycle
