#include "safdim/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace safdim {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

BigInt parse_digits(std::string_view s) {
    BigInt v = 0;
    for (char c : s) v = v * 10 + (c - '0');
    return v;
}

Rational parse_decimal(std::string_view text) {
    std::string_view s = text;
    int sign = 1;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        if (s.front() == '-') sign = -1;
        s.remove_prefix(1);
    }
    std::string_view mantissa = s;
    long exp10 = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == 'e' || s[i] == 'E') {
            mantissa = s.substr(0, i);
            std::string_view es = s.substr(i + 1);
            int esign = 1;
            if (!es.empty() && (es.front() == '+' || es.front() == '-')) {
                if (es.front() == '-') esign = -1;
                es.remove_prefix(1);
            }
            if (!all_digits(es) || es.size() > 6)
                throw std::invalid_argument("bad exponent in number: " + std::string(text));
            exp10 = esign * std::stol(std::string(es));
            break;
        }
    }
    std::string_view ipart = mantissa, fpart;
    for (size_t i = 0; i < mantissa.size(); ++i) {
        if (mantissa[i] == '.') {
            ipart = mantissa.substr(0, i);
            fpart = mantissa.substr(i + 1);
            break;
        }
    }
    if (ipart.empty() && fpart.empty())
        throw std::invalid_argument("empty number: " + std::string(text));
    if ((!ipart.empty() && !all_digits(ipart)) || (!fpart.empty() && !all_digits(fpart)))
        throw std::invalid_argument("malformed number: " + std::string(text));

    BigInt digits = 0;
    if (!ipart.empty()) digits = parse_digits(ipart);
    for (char c : fpart) digits = digits * 10 + (c - '0');
    long scale = exp10 - static_cast<long>(fpart.size());

    Rational r(digits);
    if (scale > 0)
        r *= Rational(pow_int(10, static_cast<unsigned>(scale)));
    else if (scale < 0)
        r /= Rational(pow_int(10, static_cast<unsigned>(-scale)));
    return sign < 0 ? -r : r;
}

Rational parse_fraction(std::string_view text, size_t slash) {
    std::string_view ns = text.substr(0, slash);
    std::string_view ds = text.substr(slash + 1);
    int sign = 1;
    if (!ns.empty() && (ns.front() == '+' || ns.front() == '-')) {
        if (ns.front() == '-') sign = -1;
        ns.remove_prefix(1);
    }
    if (!all_digits(ns) || !all_digits(ds))
        throw std::invalid_argument("malformed fraction: " + std::string(text));
    BigInt num = parse_digits(ns);
    BigInt den = parse_digits(ds);
    if (den == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
    Rational r(num, den);
    return sign < 0 ? -r : r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    size_t slash = text.find('/');
    if (slash != std::string_view::npos) return parse_fraction(text, slash);
    return parse_decimal(text);
}

std::optional<Rational> try_parse_rational(std::string_view text) {
    try {
        return parse_rational(text);
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

std::string rational_fraction_string(const Rational& r) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    std::string s = num.str();
    if (den != 1) s += "/" + den.str();
    return s;
}

std::string rational_decimal_string(const Rational& r) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    bool neg = num < 0;
    if (neg) num = -num;

    unsigned twos = 0, fives = 0;
    BigInt rest = den;
    while (rest % 2 == 0) { rest /= 2; ++twos; }
    while (rest % 5 == 0) { rest /= 5; ++fives; }
    if (rest != 1) return rational_fraction_string(r);

    unsigned k = std::max(twos, fives);
    BigInt scaled = num * pow_int(10, k) / den;  // exact: den | 10^k
    BigInt tenk = pow_int(10, k);
    BigInt whole = scaled / tenk;
    BigInt frac = scaled % tenk;

    std::string out = neg ? "-" : "";
    out += whole.str();
    if (frac != 0) {
        std::string fs = frac.str();
        fs.insert(fs.begin(), k - fs.size(), '0');
        while (!fs.empty() && fs.back() == '0') fs.pop_back();
        out += "." + fs;
    }
    return out;
}

double rational_to_double(const Rational& r) { return r.convert_to<double>(); }

HighPrec rational_to_highprec(const Rational& r) {
    return HighPrec(boost::multiprecision::numerator(r)) /
           HighPrec(boost::multiprecision::denominator(r));
}

BigInt pow_int(const BigInt& base, unsigned exp) {
    BigInt result = 1, b = base;
    while (exp) {
        if (exp & 1u) result *= b;
        b *= b;
        exp >>= 1u;
    }
    return result;
}

}  // namespace safdim
