#ifndef GRFORGE_RATIONAL_H
#define GRFORGE_RATIONAL_H

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace grforge {

/*
  Exact nonnegative-or-signed fraction with 64-bit numerator and denominator.
  Always normalized: den > 0 and gcd(|num|, den) == 1. Used for action costs,
  plan costs, heuristic values, recogniser scores and resilience thresholds,
  all of which must compare exactly.
*/
class Rational {
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;

public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t value) : num_(value), den_(1) {}
    Rational(std::int64_t num, std::int64_t den);

    std::int64_t numerator() const {return num_;}
    std::int64_t denominator() const {return den_;}
    bool is_integer() const {return den_ == 1;}

    double to_double() const {return static_cast<double>(num_) / static_cast<double>(den_);}

    // Decimal form when the expansion terminates ("1.5"), else "p/q".
    std::string to_string() const;

    // Accepts "3", "-2", "1.25", "3/4". Throws std::invalid_argument.
    static Rational parse(std::string_view text);

    Rational &operator+=(const Rational &other);
    Rational &operator-=(const Rational &other);
    Rational &operator*=(const Rational &other);
    Rational &operator/=(const Rational &other);

    friend Rational operator+(Rational lhs, const Rational &rhs) {return lhs += rhs;}
    friend Rational operator-(Rational lhs, const Rational &rhs) {return lhs -= rhs;}
    friend Rational operator*(Rational lhs, const Rational &rhs) {return lhs *= rhs;}
    friend Rational operator/(Rational lhs, const Rational &rhs) {return lhs /= rhs;}

    friend bool operator==(const Rational &lhs, const Rational &rhs) {
        return lhs.num_ == rhs.num_ && lhs.den_ == rhs.den_;
    }
    friend std::strong_ordering operator<=>(const Rational &lhs, const Rational &rhs);
};

}

template<>
struct std::hash<grforge::Rational> {
    std::size_t operator()(const grforge::Rational &r) const noexcept {
        return std::hash<std::int64_t>()(r.numerator()) * 31u ^
               std::hash<std::int64_t>()(r.denominator());
    }
};

#endif
