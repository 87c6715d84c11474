#include "schedcycle/task_model.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace schedcycle {

Tick checked_add(Tick a, Tick b, const std::string &what) {
    Tick r;
    if (__builtin_add_overflow(a, b, &r))
        throw ArithmeticOverflow("arithmetic overflow in " + what + ": " + std::to_string(a) + " + " +
                                 std::to_string(b));
    return r;
}

Tick checked_mul(Tick a, Tick b, const std::string &what) {
    Tick r;
    if (__builtin_mul_overflow(a, b, &r))
        throw ArithmeticOverflow("arithmetic overflow in " + what + ": " + std::to_string(a) + " * " +
                                 std::to_string(b));
    return r;
}

Tick checked_lcm(Tick a, Tick b, const std::string &what) {
    if (a == 0 || b == 0)
        return 0;
    Tick g = std::gcd(a, b);
    return checked_mul(a / g, b, what);
}

Tick ceil_div(Tick num, Tick den) {
    Tick q = num / den;
    if (num % den != 0 && num > 0)
        ++q;
    return q;
}

// ---------------------------------------------------------------- Rational

Rational::Rational(Tick num, Tick den) {
    if (den == 0)
        throw std::invalid_argument("Rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    Tick g = std::gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    num_ = num;
    den_ = den;
}

Rational Rational::operator+(const Rational &o) const {
    Tick g = std::gcd(den_, o.den_);
    Tick den = checked_mul(den_ / g, o.den_, "rational addition");
    Tick lhs = checked_mul(num_, o.den_ / g, "rational addition");
    Tick rhs = checked_mul(o.num_, den_ / g, "rational addition");
    return {checked_add(lhs, rhs, "rational addition"), den};
}

Rational Rational::operator-(const Rational &o) const { return *this + Rational(-o.num_, o.den_); }

Rational Rational::operator*(const Rational &o) const {
    Tick g1 = std::gcd(num_, o.den_);
    Tick g2 = std::gcd(o.num_, den_);
    if (g1 == 0)
        g1 = 1;
    if (g2 == 0)
        g2 = 1;
    return {checked_mul(num_ / g1, o.num_ / g2, "rational product"),
            checked_mul(den_ / g2, o.den_ / g1, "rational product")};
}

std::strong_ordering Rational::operator<=>(const Rational &o) const {
    __extension__ using wide = __int128;
    wide lhs = static_cast<wide>(num_) * o.den_;
    wide rhs = static_cast<wide>(o.num_) * den_;
    if (lhs < rhs)
        return std::strong_ordering::less;
    if (lhs > rhs)
        return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Rational::str() const {
    if (den_ == 1)
        return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

// ------------------------------------------------------------ constraints

StructuralConstraint StructuralConstraint::precedes(TaskId producer, TaskId consumer) {
    return {ConstraintKind::precedes, producer, consumer, 0, 0};
}

StructuralConstraint StructuralConstraint::excludes(TaskId a, TaskId b) {
    return {ConstraintKind::excludes, a, b, 0, 0};
}

StructuralConstraint StructuralConstraint::suspends(TaskId task, Tick after, Tick delay) {
    return {ConstraintKind::suspends, task, 0, after, delay};
}

StructuralConstraint StructuralConstraint::non_preemptive(TaskId task) {
    return {ConstraintKind::non_preemptive, task, 0, 0, 0};
}

const char *to_string(ConstraintKind kind) {
    switch (kind) {
    case ConstraintKind::precedes:
        return "precedes";
    case ConstraintKind::excludes:
        return "excludes";
    case ConstraintKind::suspends:
        return "suspends";
    case ConstraintKind::non_preemptive:
        return "non_preemptive";
    }
    return "?";
}

// -------------------------------------------------------------- task model

Tick JobId::release(const TaskSystem &system) const {
    const Task &t = system.task(task);
    return checked_add(t.offset, checked_mul(index, t.period, "job release"), "job release");
}

Tick JobId::absolute_deadline(const TaskSystem &system) const {
    return checked_add(release(system), system.task(task).deadline, "job deadline");
}

Tick hyperperiod(const TaskSystem &system) {
    Tick h = 1;
    for (const Task &t : system.tasks)
        h = checked_lcm(h, t.period, "hyperperiod lcm step at task " + std::to_string(t.id));
    return h;
}

Rational utilization(const TaskSystem &system) {
    Rational u;
    for (const Task &t : system.tasks)
        u += Rational(t.wcet, t.period);
    return u;
}

Tick max_offset(const TaskSystem &system) {
    Tick m = 0;
    for (const Task &t : system.tasks)
        m = std::max(m, t.offset);
    return m;
}

TaskSystem synchronize(const TaskSystem &system) {
    TaskSystem s = system;
    for (Task &t : s.tasks) {
        t.deadline = checked_add(t.deadline, t.offset, "synchronized deadline");
        t.offset = 0;
    }
    return s;
}

bool is_synchronous(const TaskSystem &system) {
    return std::all_of(system.tasks.begin(), system.tasks.end(), [](const Task &t) { return t.offset == 0; });
}

bool has_constrained_deadlines(const TaskSystem &system) {
    return std::all_of(system.tasks.begin(), system.tasks.end(),
                       [](const Task &t) { return t.deadline <= t.period; });
}

std::vector<Diagnostic> validate(const TaskSystem &system) {
    std::vector<Diagnostic> out;
    auto error = [&](std::string msg) { out.push_back({Diagnostic::Severity::error, std::move(msg)}); };
    auto warning = [&](std::string msg) { out.push_back({Diagnostic::Severity::warning, std::move(msg)}); };

    if (system.processors < 1)
        error("processors must be >= 1, got " + std::to_string(system.processors));

    const auto n = static_cast<TaskId>(system.tasks.size());
    std::set<TaskId> ids;
    for (std::size_t i = 0; i < system.tasks.size(); ++i) {
        const Task &t = system.tasks[i];
        const std::string who = "task " + std::to_string(t.id);
        if (!ids.insert(t.id).second)
            error("duplicate task id " + std::to_string(t.id));
        if (t.id < 1 || t.id > n)
            error(who + ": ids must be contiguous 1.." + std::to_string(n));
        else if (t.id != static_cast<TaskId>(i + 1))
            error(who + ": tasks must be listed in id order");
        if (t.offset < 0)
            error(who + ": offset must be >= 0");
        if (t.wcet < 1)
            error(who + ": wcet must be >= 1");
        if (t.period < 1)
            error(who + ": period must be >= 1");
        if (t.deadline < 1)
            error(who + ": deadline must be >= 1");
        if (t.wcet >= 1 && t.deadline >= 1 && t.wcet > t.deadline)
            warning(who + ": wcet " + std::to_string(t.wcet) + " > deadline " + std::to_string(t.deadline) +
                    " (every job misses)");
    }

    auto known = [&](TaskId id) { return id >= 1 && id <= n; };
    std::set<TaskId> suspended;
    for (const StructuralConstraint &c : system.constraints) {
        const std::string what = std::string(to_string(c.kind)) + " constraint";
        if (!known(c.first)) {
            error(what + " references unknown task " + std::to_string(c.first));
            continue;
        }
        switch (c.kind) {
        case ConstraintKind::precedes:
        case ConstraintKind::excludes:
            if (!known(c.second))
                error(what + " references unknown task " + std::to_string(c.second));
            else if (c.first == c.second)
                error(what + " relates task " + std::to_string(c.first) + " to itself");
            break;
        case ConstraintKind::suspends: {
            const Task &t = system.task(c.first);
            if (c.after < 1 || c.after >= t.wcet)
                error(what + " on task " + std::to_string(c.first) + ": after must be in [1, wcet)");
            if (c.delay < 1)
                error(what + " on task " + std::to_string(c.first) + ": delay must be >= 1");
            if (!suspended.insert(c.first).second)
                error("task " + std::to_string(c.first) + " has more than one suspends constraint");
            break;
        }
        case ConstraintKind::non_preemptive:
            break;
        }
    }

    bool params_ok = std::none_of(out.begin(), out.end(), [](const Diagnostic &d) { return d.is_error(); });
    if (params_ok && system.processors >= 1) {
        try {
            Rational u = utilization(system);
            if (u > Rational(system.processors))
                warning("U=" + u.str() + " > m=" + std::to_string(system.processors) +
                        " (necessarily infeasible)");
        } catch (const ArithmeticOverflow &e) {
            error(e.what());
        }
    }
    return out;
}

void require_valid(const TaskSystem &system) {
    std::ostringstream msg;
    bool bad = false;
    for (const Diagnostic &d : validate(system)) {
        if (d.is_error()) {
            msg << (bad ? "; " : "") << d.message;
            bad = true;
        }
    }
    if (bad)
        throw InputError("invalid task system: " + msg.str());
}

} // namespace schedcycle
