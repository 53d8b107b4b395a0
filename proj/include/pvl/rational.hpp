#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace pvl {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Parses "3", "-2/5", "1/4". Whitespace is not accepted.
inline Rat parse_rational(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return Rat(BigInt(text));
        }
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rat(num, den);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("malformed rational: " + text);
    }
}

inline std::string rational_to_string(const Rat& r) {
    std::string num = numerator(r).str();
    if (denominator(r) == 1) return num;
    return num + "/" + denominator(r).str();
}

inline double rational_to_double(const Rat& r) {
    return r.convert_to<double>();
}

// ceil(a/b) for positive b.
inline BigInt ceil_div(const BigInt& a, const BigInt& b) {
    return (a + b - 1) / b;
}

}  // namespace pvl
