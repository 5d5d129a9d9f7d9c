#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace museum {

// Exact rational arithmetic for score coefficients. Halves come from the
// synonym rule, other denominators only from the page-level mean and from
// configured visual weights, so i64 never gets close to overflow here.
class Rational {
public:
    Rational() : value_(0) {}
    Rational(long long n) : value_(n) {}  // NOLINT(google-explicit-constructor)
    Rational(long long num, long long den) : value_(num, den) {}

    long long num() const { return value_.numerator(); }
    long long den() const { return value_.denominator(); }

    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o) { value_ /= o.value_; return *this; }

    friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
    friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
    friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
    friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.value_ != b.value_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.value_ < b.value_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.value_ <= b.value_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.value_ > b.value_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.value_ >= b.value_; }

    bool is_zero() const { return value_.numerator() == 0; }
    bool is_negative() const { return value_.numerator() < 0; }

    // Shortest exact decimal string when the reduced denominator is of the
    // form 2^a * 5^b ("4.5", "4.25", "0.5", "3"); otherwise the exact
    // fraction "num/den". Never loses precision.
    std::string to_decimal_string() const;

    // Parses what to_decimal_string produces, plus plain decimals like
    // "2.5" or "-0.125". Throws EngineError(ParseError) on anything else.
    static Rational parse(std::string_view text);

private:
    boost::rational<long long> value_;
};

}  // namespace museum
