#include "dfq/rational.hpp"

#include <cctype>
#include <cmath>

#include "dfq/errors.hpp"

namespace dfq {

BigInt floor(const Rational &r)
{
    BigInt n = numerator(r), d = denominator(r);
    BigInt q = n / d;
    if (n % d != 0 and n < 0) --q;
    return q;
}

BigInt ceil(const Rational &r)
{
    BigInt n = numerator(r), d = denominator(r);
    BigInt q = n / d;
    if (n % d != 0 and n > 0) ++q;
    return q;
}

Rational to_rational(double d)
{
    if (not std::isfinite(d)) throw InvalidArgument("non-finite number");
    int exp = 0;
    double mant = std::frexp(d, &exp);
    // 53 mantissa bits scaled to an integer.
    BigInt m = static_cast<long long>(std::ldexp(mant, 53));
    exp -= 53;
    Rational r(m);
    if (exp > 0)
        r *= Rational(BigInt(1) << exp);
    else if (exp < 0)
        r /= Rational(BigInt(1) << -exp);
    return r;
}

double to_double(const Rational &r) { return r.convert_to<double>(); }

std::string to_string(const Rational &r)
{
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

namespace {

std::optional<Rational> parse_decimal_rational(std::string_view s)
{
    bool neg = false;
    if (not s.empty() and (s[0] == '-' or s[0] == '+')) {
        neg = s[0] == '-';
        s.remove_prefix(1);
    }
    BigInt digits = 0;
    long long scale = 0;
    bool any = false, dot = false;
    std::size_t i = 0;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c == '.' and not dot) {
            dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits = digits * 10 + (c - '0');
            any = true;
            if (dot) --scale;
        } else {
            break;
        }
    }
    if (not any) return std::nullopt;
    if (i < s.size()) {
        if (s[i] != 'e' and s[i] != 'E') return std::nullopt;
        std::string_view rest = s.substr(i + 1);
        bool eneg = false;
        if (not rest.empty() and (rest[0] == '-' or rest[0] == '+')) {
            eneg = rest[0] == '-';
            rest.remove_prefix(1);
        }
        if (rest.empty() or rest.size() > 6) return std::nullopt;
        long long e = 0;
        for (char c : rest) {
            if (not std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
            e = e * 10 + (c - '0');
        }
        scale += eneg ? -e : e;
    }
    Rational r(digits);
    BigInt ten = 1;
    for (long long k = 0; k < (scale < 0 ? -scale : scale); ++k) ten *= 10;
    if (scale > 0) r *= Rational(ten);
    if (scale < 0) r /= Rational(ten);
    return neg ? Rational(-r) : r;
}

} // namespace

std::optional<Rational> parse_rational(std::string_view s)
{
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto n = parse_decimal_rational(s.substr(0, slash));
        auto d = parse_decimal_rational(s.substr(slash + 1));
        if (not n or not d or *d == 0) return std::nullopt;
        return Rational(*n / *d);
    }
    return parse_decimal_rational(s);
}

} // namespace dfq
