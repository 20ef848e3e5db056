#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace siegel {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_floor(const Rat& x) {
    Int num = boost::multiprecision::numerator(x);
    Int den = boost::multiprecision::denominator(x);
    Int q = num / den;  // truncates toward zero
    if (num < 0 && q * den != num) --q;
    return q;
}

// <x>: representative of x mod 1 in [0,1)
inline Rat frac_part(const Rat& x) {
    return x - Rat(rat_floor(x));
}

// second Bernoulli polynomial x^2 - x + 1/6
inline Rat b2(const Rat& x) {
    return x * x - x + Rat(1, 6);
}

inline double to_double(const Rat& x) {
    return x.convert_to<double>();
}

// least positive d with d*x integral
inline Int exact_denominator(const Rat& x) {
    return boost::multiprecision::denominator(x);
}

inline std::string rat_str(const Rat& x) {
    Int num = boost::multiprecision::numerator(x);
    Int den = boost::multiprecision::denominator(x);
    std::string s = num.str();
    if (den != 1) s += "/" + den.str();
    return s;
}

// accepts "p", "-p", "p/q" with optional surrounding spaces
inline Rat parse_rat(const std::string& text) {
    std::size_t a = text.find_first_not_of(" \t");
    std::size_t b = text.find_last_not_of(" \t");
    if (a == std::string::npos) throw std::invalid_argument("empty rational");
    std::string s = text.substr(a, b - a + 1);
    std::size_t slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rat(num, den);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("bad rational: " + s);
    }
}

}  // namespace siegel
