#include "dfq/value.hpp"

#include "dfq/errors.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <unordered_set>

namespace dfq {

namespace {

const std::string *intern(std::string_view s)
{
    static std::mutex mutex;
    static std::unordered_set<std::string> pool;
    std::lock_guard lock(mutex);
    return &*pool.emplace(s).first;
}

template<typename T>
std::strong_ordering cmp3(const T &a, const T &b)
{
    if (a < b) return std::strong_ordering::less;
    if (b < a) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

bool apply(CompareOp op, std::strong_ordering o)
{
    switch (op) {
        case CompareOp::Gt: return o > 0;
        case CompareOp::Ge: return o >= 0;
        case CompareOp::Eq: return o == 0;
        case CompareOp::Ne: return o != 0;
        case CompareOp::Le: return o <= 0;
        case CompareOp::Lt: return o < 0;
    }
    return false;
}

constexpr std::int64_t kMillisPerDay = 86'400'000;

bool all_digits(std::string_view s)
{
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' or c > '9') return false;
    return true;
}

std::optional<int> fixed_int(std::string_view s, std::size_t width)
{
    if (s.size() != width or not all_digits(s)) return std::nullopt;
    int v = 0;
    for (char c : s) v = v * 10 + (c - '0');
    return v;
}

/// Parses `HH:MM[:SS[.fff]]` into milliseconds after midnight.
std::optional<std::int64_t> parse_clock(std::string_view s)
{
    if (s.size() < 5 or s[2] != ':') return std::nullopt;
    auto hh = fixed_int(s.substr(0, 2), 2);
    auto mm = fixed_int(s.substr(3, 2), 2);
    if (not hh or not mm or *hh > 23 or *mm > 59) return std::nullopt;
    std::int64_t ms = (*hh * 60LL + *mm) * 60'000LL;
    s.remove_prefix(5);
    if (s.empty()) return ms;
    if (s[0] != ':' or s.size() < 3) return std::nullopt;
    auto ss = fixed_int(s.substr(1, 2), 2);
    if (not ss or *ss > 59) return std::nullopt;
    ms += *ss * 1000LL;
    s.remove_prefix(3);
    if (s.empty()) return ms;
    if (s[0] != '.' or s.size() < 2 or s.size() > 4 or not all_digits(s.substr(1))) return std::nullopt;
    int frac = 0;
    for (char c : s.substr(1)) frac = frac * 10 + (c - '0');
    for (std::size_t i = s.size() - 1; i < 3; ++i) frac *= 10;
    return ms + frac;
}

} // namespace

std::string_view to_string(Domain d)
{
    switch (d) {
        case Domain::Integer: return "integer";
        case Domain::Decimal: return "decimal";
        case Domain::Timestamp: return "timestamp";
        case Domain::Text: return "text";
    }
    return "?";
}

std::optional<Domain> parse_domain(std::string_view s)
{
    if (s == "integer") return Domain::Integer;
    if (s == "decimal") return Domain::Decimal;
    if (s == "timestamp") return Domain::Timestamp;
    if (s == "text") return Domain::Text;
    return std::nullopt;
}

std::string_view to_string(CompareOp op)
{
    switch (op) {
        case CompareOp::Gt: return ">";
        case CompareOp::Ge: return ">=";
        case CompareOp::Eq: return "=";
        case CompareOp::Ne: return "!=";
        case CompareOp::Le: return "<=";
        case CompareOp::Lt: return "<";
    }
    return "?";
}

CompareOp mirrored(CompareOp op)
{
    switch (op) {
        case CompareOp::Gt: return CompareOp::Lt;
        case CompareOp::Ge: return CompareOp::Le;
        case CompareOp::Le: return CompareOp::Ge;
        case CompareOp::Lt: return CompareOp::Gt;
        default: return op;
    }
}

Value Value::integer(std::int64_t i)
{
    Value v;
    v.v_ = i;
    return v;
}

Value Value::decimal(double d)
{
    if (std::isnan(d)) throw InvalidArgument("decimal value must not be NaN");
    Value v;
    v.v_ = Decimal{d == 0.0 ? 0.0 : d}; // fold -0.0 so that equal values hash equally
    return v;
}

Value Value::timestamp(std::int64_t millis)
{
    Value v;
    v.v_ = Timestamp{millis};
    return v;
}

Value Value::text(std::string_view s)
{
    Value v;
    v.v_ = Text{intern(s)};
    return v;
}

std::optional<Domain> Value::domain() const
{
    switch (v_.index()) {
        case 1: return Domain::Integer;
        case 2: return Domain::Decimal;
        case 3: return Domain::Timestamp;
        case 4: return Domain::Text;
        default: return std::nullopt;
    }
}

std::int64_t Value::as_integer() const { return std::get<std::int64_t>(v_); }
double Value::as_decimal() const { return std::get<Decimal>(v_).value; }
std::int64_t Value::as_timestamp() const { return std::get<Timestamp>(v_).millis; }
std::string_view Value::as_text() const { return *std::get<Text>(v_).str; }

std::size_t Value::hash() const
{
    std::size_t h;
    switch (v_.index()) {
        case 0: h = 0x9e3779b97f4a7c15ULL; break;
        case 1: h = std::hash<std::int64_t>{}(as_integer()); break;
        case 2: h = std::hash<double>{}(as_decimal()); break;
        case 3: h = std::hash<std::int64_t>{}(as_timestamp()) ^ 0x51ed27ULL; break;
        default: h = std::hash<const void *>{}(std::get<Text>(v_).str); break;
    }
    return h ^ (v_.index() * 0x100000001b3ULL);
}

bool operator==(const Value &a, const Value &b)
{
    if (a.v_.index() != b.v_.index()) return false;
    switch (a.v_.index()) {
        case 0: return true;
        case 1: return a.as_integer() == b.as_integer();
        case 2: return a.as_decimal() == b.as_decimal();
        case 3: return a.as_timestamp() == b.as_timestamp();
        default: return std::get<Value::Text>(a.v_).str == std::get<Value::Text>(b.v_).str;
    }
}

std::strong_ordering operator<=>(const Value &a, const Value &b)
{
    if (a.v_.index() != b.v_.index()) return cmp3(a.v_.index(), b.v_.index());
    switch (a.v_.index()) {
        case 0: return std::strong_ordering::equal;
        case 1: return cmp3(a.as_integer(), b.as_integer());
        case 2: return cmp3(a.as_decimal(), b.as_decimal());
        case 3: return cmp3(a.as_timestamp(), b.as_timestamp());
        default: {
            auto pa = std::get<Value::Text>(a.v_).str, pb = std::get<Value::Text>(b.v_).str;
            if (pa == pb) return std::strong_ordering::equal;
            return cmp3(std::string_view(*pa), std::string_view(*pb));
        }
    }
}

bool compare(const Value &lhs, CompareOp op, const Value &rhs)
{
    if (lhs.is_absent() or rhs.is_absent()) return false;
    if (lhs.domain() != rhs.domain())
        throw TypeError("cannot compare " + std::string(to_string(*lhs.domain())) + " with " +
                        std::string(to_string(*rhs.domain())));
    return apply(op, lhs <=> rhs);
}

std::string format_timestamp(std::int64_t millis)
{
    using namespace std::chrono;
    std::int64_t day = millis >= 0 ? millis / kMillisPerDay : -((-millis + kMillisPerDay - 1) / kMillisPerDay);
    std::int64_t in_day = millis - day * kMillisPerDay;
    int hh = int(in_day / 3'600'000), mm = int(in_day / 60'000 % 60), ss = int(in_day / 1000 % 60),
        ms = int(in_day % 1000);
    std::array<char, 64> buf;
    int n = 0;
    if (day != 0) {
        year_month_day ymd{sys_days{days{day}}};
        n = std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02uT%02d:%02d:%02d", int(ymd.year()),
                          unsigned(ymd.month()), unsigned(ymd.day()), hh, mm, ss);
        if (ms) n += std::snprintf(buf.data() + n, buf.size() - n, ".%03d", ms);
        n += std::snprintf(buf.data() + n, buf.size() - n, "Z");
    } else {
        n = std::snprintf(buf.data(), buf.size(), "%02d:%02d", hh, mm);
        if (ss or ms) n += std::snprintf(buf.data() + n, buf.size() - n, ":%02d", ss);
        if (ms) n += std::snprintf(buf.data() + n, buf.size() - n, ".%03d", ms);
    }
    return std::string(buf.data(), n);
}

std::optional<std::int64_t> parse_timestamp(std::string_view s)
{
    using namespace std::chrono;
    if (s.size() >= 5 and s[2] == ':') return parse_clock(s);
    if (s.size() < 10 or s[4] != '-' or s[7] != '-') return std::nullopt;
    auto y = fixed_int(s.substr(0, 4), 4);
    auto m = fixed_int(s.substr(5, 2), 2);
    auto d = fixed_int(s.substr(8, 2), 2);
    if (not y or not m or not d) return std::nullopt;
    year_month_day ymd{year{*y}, month{unsigned(*m)}, day{unsigned(*d)}};
    if (not ymd.ok()) return std::nullopt;
    std::int64_t base = std::int64_t(sys_days{ymd}.time_since_epoch().count()) * kMillisPerDay;
    s.remove_prefix(10);
    if (s.empty()) return base;
    if (s[0] != 'T') return std::nullopt;
    s.remove_prefix(1);
    if (not s.empty() and s.back() == 'Z') s.remove_suffix(1);
    auto clock = parse_clock(s);
    if (not clock) return std::nullopt;
    return base + *clock;
}

std::optional<std::int64_t> parse_integer(std::string_view s)
{
    if (s.empty()) return std::nullopt;
    std::size_t start = (s[0] == '+') ? 1 : 0;
    std::int64_t v{};
    auto [ptr, ec] = std::from_chars(s.data() + start, s.data() + s.size(), v);
    if (ec != std::errc() or ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<double> parse_decimal(std::string_view s)
{
    if (s.empty()) return std::nullopt;
    std::size_t start = (s[0] == '+') ? 1 : 0;
    double v{};
    auto [ptr, ec] = std::from_chars(s.data() + start, s.data() + s.size(), v);
    if (ec != std::errc() or ptr != s.data() + s.size() or std::isnan(v) or std::isinf(v)) return std::nullopt;
    return v;
}

std::optional<Value> parse_value(std::string_view text, Domain d)
{
    if (text.empty()) return Value::absent();
    switch (d) {
        case Domain::Integer:
            if (auto i = parse_integer(text)) return Value::integer(*i);
            return std::nullopt;
        case Domain::Decimal:
            if (auto x = parse_decimal(text)) return Value::decimal(*x);
            return std::nullopt;
        case Domain::Timestamp:
            if (auto t = parse_timestamp(text)) return Value::timestamp(*t);
            return std::nullopt;
        case Domain::Text: return Value::text(text);
    }
    return std::nullopt;
}

namespace {

std::string decimal_literal(double d)
{
    std::array<char, 64> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), d);
    std::string s(buf.data(), ptr);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

} // namespace

std::string to_display(const Value &v)
{
    if (v.is_absent()) return "";
    switch (*v.domain()) {
        case Domain::Integer: return std::to_string(v.as_integer());
        case Domain::Decimal: return decimal_literal(v.as_decimal());
        case Domain::Timestamp: return format_timestamp(v.as_timestamp());
        case Domain::Text: return std::string(v.as_text());
    }
    return "";
}

std::string to_literal(const Value &v)
{
    if (v.is_absent()) return "absent";
    if (*v.domain() != Domain::Text) return to_display(v);
    std::string out = "'";
    for (char c : v.as_text()) {
        if (c == '\'' or c == '\\') out += '\\';
        out += c;
    }
    out += '\'';
    return out;
}

} // namespace dfq
