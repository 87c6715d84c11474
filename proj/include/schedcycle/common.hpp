#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace schedcycle {

// All time quantities are integer ticks of the platform clock.
using Tick = std::int64_t;
using TaskId = int;

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Malformed input files, schema violations, invalid task systems.
class InputError : public Error {
  public:
    using Error::Error;
};

// Scheduler configured without the data it needs (e.g. FTP without priorities).
class ConfigError : public Error {
  public:
    using Error::Error;
};

// A scheduling decision that breaks a sched_core validity rule.
class InvalidDecision : public Error {
  public:
    using Error::Error;
};

// A schedule that a table-driven (memoryless) scheduler cannot realize.
class InvalidTrace : public Error {
  public:
    using Error::Error;
};

class ArithmeticOverflow : public Error {
  public:
    using Error::Error;
};

class InvariantViolation : public Error {
  public:
    using Error::Error;
};

// Search budgets (vertex cap, DFS step cap) exhausted.
class LimitExceeded : public Error {
  public:
    using Error::Error;
};

Tick checked_add(Tick a, Tick b, const std::string &what);
Tick checked_mul(Tick a, Tick b, const std::string &what);
Tick checked_lcm(Tick a, Tick b, const std::string &what);

// Mathematical ceiling of num/den for den > 0.
Tick ceil_div(Tick num, Tick den);

} // namespace schedcycle
