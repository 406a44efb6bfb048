#include <akita/rational.hpp>

#include <cmath>
#include <cstdio>

namespace akita {

using boost::multiprecision::cpp_int;

double to_double(const Rational& r) {
    return r.convert_to<double>();
}

std::string to_fraction_string(const Rational& r) {
    const cpp_int num = numerator(r);
    const cpp_int den = denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

std::string to_fixed6(const Rational& r) {
    const cpp_int num = numerator(r);
    const cpp_int den = denominator(r);
    const bool negative = num < 0;
    const cpp_int mag = negative ? cpp_int(-num) : num;
    // round(|r| * 10^6) with ties away from zero
    const cpp_int scaled = (mag * 2000000 + den) / (den * 2);
    const cpp_int whole = scaled / 1000000;
    const cpp_int frac = scaled % 1000000;
    std::string frac_text = frac.str();
    frac_text.insert(0, 6 - frac_text.size(), '0');
    std::string out = whole.str() + "." + frac_text;
    if (negative && scaled != 0) out.insert(0, "-");
    return out;
}

std::string to_fixed6(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string out(buf);
    if (out == "-0.000000") out = "0.000000";
    return out;
}

}  // namespace akita
