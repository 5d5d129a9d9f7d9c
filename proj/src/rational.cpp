#include "museum/rational.hpp"

#include "museum/errors.hpp"

#include <cctype>
#include <cstdlib>

namespace museum {

std::string Rational::to_decimal_string() const {
    long long n = num();
    long long d = den();
    bool neg = n < 0;
    unsigned long long un = neg ? static_cast<unsigned long long>(-(n + 1)) + 1ULL
                                : static_cast<unsigned long long>(n);
    unsigned long long ud = static_cast<unsigned long long>(d);

    // Count the 2s and 5s in the denominator; anything else means the
    // decimal expansion does not terminate.
    unsigned long long rest = ud;
    int twos = 0, fives = 0;
    while (rest % 2 == 0) { rest /= 2; ++twos; }
    while (rest % 5 == 0) { rest /= 5; ++fives; }
    if (rest != 1) {
        return std::to_string(n) + "/" + std::to_string(d);
    }

    int digits = twos > fives ? twos : fives;
    // Scale numerator so denominator becomes 10^digits.
    unsigned long long scaled = un;
    for (int i = twos; i < digits; ++i) scaled *= 2;
    for (int i = fives; i < digits; ++i) scaled *= 5;

    std::string body = std::to_string(scaled);
    std::string out;
    if (digits == 0) {
        out = body;
    } else {
        if (body.size() <= static_cast<size_t>(digits)) {
            body.insert(0, static_cast<size_t>(digits) + 1 - body.size(), '0');
        }
        out = body.substr(0, body.size() - digits) + "." + body.substr(body.size() - digits);
        while (out.back() == '0') out.pop_back();
        if (out.back() == '.') out.pop_back();
    }
    if (neg && out != "0") out.insert(out.begin(), '-');
    return out;
}

Rational Rational::parse(std::string_view text) {
    if (text.empty()) {
        throw EngineError(ErrorKind::ParseError, "empty rational literal");
    }
    size_t slash = text.find('/');
    if (slash != std::string_view::npos) {
        std::string nstr(text.substr(0, slash));
        std::string dstr(text.substr(slash + 1));
        if (nstr.empty() || dstr.empty()) {
            throw EngineError(ErrorKind::ParseError, "malformed fraction: " + std::string(text));
        }
        char* end = nullptr;
        long long n = std::strtoll(nstr.c_str(), &end, 10);
        if (*end != '\0') {
            throw EngineError(ErrorKind::ParseError, "malformed fraction numerator: " + nstr);
        }
        long long d = std::strtoll(dstr.c_str(), &end, 10);
        if (*end != '\0' || d == 0) {
            throw EngineError(ErrorKind::ParseError, "malformed fraction denominator: " + dstr);
        }
        return Rational(n, d);
    }

    bool neg = false;
    size_t i = 0;
    if (text[0] == '-' || text[0] == '+') {
        neg = text[0] == '-';
        i = 1;
    }
    long long intpart = 0;
    long long fracnum = 0;
    long long fracden = 1;
    bool any_digit = false;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
        intpart = intpart * 10 + (text[i] - '0');
        any_digit = true;
    }
    if (i < text.size()) {
        if (text[i] != '.') {
            throw EngineError(ErrorKind::ParseError, "malformed decimal: " + std::string(text));
        }
        ++i;
        bool frac_digit = false;
        for (; i < text.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
                throw EngineError(ErrorKind::ParseError, "malformed decimal: " + std::string(text));
            }
            fracnum = fracnum * 10 + (text[i] - '0');
            fracden *= 10;
            frac_digit = true;
        }
        if (!frac_digit) {
            throw EngineError(ErrorKind::ParseError, "malformed decimal: " + std::string(text));
        }
        any_digit = true;
    }
    if (!any_digit) {
        throw EngineError(ErrorKind::ParseError, "malformed decimal: " + std::string(text));
    }
    Rational r = Rational(intpart) + Rational(fracnum, fracden);
    return neg ? Rational(0) - r : r;
}

}  // namespace museum
