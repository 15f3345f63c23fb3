#include "grforge/rational.h"

#include <charconv>
#include <numeric>
#include <stdexcept>

using namespace std;

namespace grforge {
namespace {
using int128 = __int128;

int64_t narrow(int128 value) {
    if (value > INT64_MAX || value < INT64_MIN)
        throw overflow_error("rational arithmetic overflow");
    return static_cast<int64_t>(value);
}

Rational make_normalized(int128 num, int128 den) {
    if (den == 0)
        throw domain_error("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    int128 a = num < 0 ? -num : num;
    int128 b = den;
    while (b != 0) {
        int128 t = a % b;
        a = b;
        b = t;
    }
    if (a > 1) {
        num /= a;
        den /= a;
    }
    return Rational(narrow(num), narrow(den));
}

int64_t parse_int(string_view text, string_view whole) {
    int64_t value = 0;
    auto [ptr, ec] = from_chars(text.data(), text.data() + text.size(), value);
    if (ec != errc() || ptr != text.data() + text.size() || text.empty())
        throw invalid_argument("not a number: '" + string(whole) + "'");
    return value;
}
}

Rational::Rational(int64_t num, int64_t den) {
    if (den == 0)
        throw domain_error("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    int64_t g = gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    num_ = num;
    den_ = den;
}

Rational &Rational::operator+=(const Rational &other) {
    if (den_ == 1 && other.den_ == 1) {
        num_ = narrow(int128(num_) + other.num_);
        return *this;
    }
    *this = make_normalized(int128(num_) * other.den_ + int128(other.num_) * den_,
                            int128(den_) * other.den_);
    return *this;
}

Rational &Rational::operator-=(const Rational &other) {
    if (den_ == 1 && other.den_ == 1) {
        num_ = narrow(int128(num_) - other.num_);
        return *this;
    }
    *this = make_normalized(int128(num_) * other.den_ - int128(other.num_) * den_,
                            int128(den_) * other.den_);
    return *this;
}

Rational &Rational::operator*=(const Rational &other) {
    *this = make_normalized(int128(num_) * other.num_, int128(den_) * other.den_);
    return *this;
}

Rational &Rational::operator/=(const Rational &other) {
    *this = make_normalized(int128(num_) * other.den_, int128(den_) * other.num_);
    return *this;
}

strong_ordering operator<=>(const Rational &lhs, const Rational &rhs) {
    if (lhs.den_ == rhs.den_)
        return lhs.num_ <=> rhs.num_;
    int128 a = int128(lhs.num_) * rhs.den_;
    int128 b = int128(rhs.num_) * lhs.den_;
    if (a < b)
        return strong_ordering::less;
    if (a > b)
        return strong_ordering::greater;
    return strong_ordering::equal;
}

string Rational::to_string() const {
    if (den_ == 1)
        return std::to_string(num_);
    int64_t d = den_;
    int twos = 0, fives = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++twos;
    }
    while (d % 5 == 0) {
        d /= 5;
        ++fives;
    }
    if (d != 1 || max(twos, fives) > 18)
        return std::to_string(num_) + "/" + std::to_string(den_);

    int digits = max(twos, fives);
    int128 scale = 1;
    for (int i = 0; i < digits; ++i)
        scale *= 10;
    int128 scaled = int128(num_ < 0 ? -num_ : num_) * (scale / den_);
    int128 whole = scaled / scale;
    int128 frac = scaled % scale;
    string frac_text(digits, '0');
    for (int i = digits - 1; i >= 0; --i) {
        frac_text[i] = static_cast<char>('0' + static_cast<int>(frac % 10));
        frac /= 10;
    }
    return (num_ < 0 ? "-" : "") + std::to_string(static_cast<int64_t>(whole)) + "." + frac_text;
}

Rational Rational::parse(string_view text) {
    if (text.empty())
        throw invalid_argument("empty number");
    if (auto slash = text.find('/'); slash != string_view::npos) {
        int64_t n = parse_int(text.substr(0, slash), text);
        int64_t d = parse_int(text.substr(slash + 1), text);
        if (d == 0)
            throw invalid_argument("zero denominator in '" + string(text) + "'");
        return Rational(n, d);
    }
    auto dot = text.find('.');
    if (dot == string_view::npos)
        return Rational(parse_int(text, text));

    bool negative = text.front() == '-';
    string_view whole = text.substr(negative ? 1 : 0, dot - (negative ? 1 : 0));
    string_view frac = text.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || frac.size() > 18 ||
        whole.find_first_not_of("0123456789") != string_view::npos ||
        frac.find_first_not_of("0123456789") != string_view::npos)
        throw invalid_argument("not a number: '" + string(text) + "'");
    int64_t scale = 1;
    for (size_t i = 0; i < frac.size(); ++i)
        scale *= 10;
    int128 value = whole.empty() ? 0 : parse_int(whole, text);
    value = value * scale + (frac.empty() ? 0 : parse_int(frac, text));
    if (negative)
        value = -value;
    return make_normalized(value, scale);
}

}
