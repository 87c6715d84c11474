#pragma once

#include "schedcycle/common.hpp"

#include <compare>
#include <numeric>
#include <ostream>
#include <string>

namespace schedcycle {

// Exact fraction over 64-bit integers, always normalized (den > 0, gcd 1).
// Arithmetic is overflow-checked.
class Rational {
  public:
    constexpr Rational() = default;
    Rational(Tick num, Tick den = 1);

    Tick num() const { return num_; }
    Tick den() const { return den_; }

    Rational operator+(const Rational &o) const;
    Rational operator-(const Rational &o) const;
    Rational operator*(const Rational &o) const;
    Rational &operator+=(const Rational &o) { return *this = *this + o; }

    bool operator==(const Rational &o) const = default;
    std::strong_ordering operator<=>(const Rational &o) const;

    bool is_integer() const { return den_ == 1; }
    std::string str() const;

  private:
    Tick num_ = 0;
    Tick den_ = 1;
};

inline std::ostream &operator<<(std::ostream &os, const Rational &r) { return os << r.str(); }

} // namespace schedcycle
