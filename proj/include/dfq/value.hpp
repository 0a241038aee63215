#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace dfq {

/// Concrete value domains an attribute can be declared with.
enum class Domain : std::uint8_t { Integer, Decimal, Timestamp, Text };

std::string_view to_string(Domain d);
std::optional<Domain> parse_domain(std::string_view s);

/// The six binary comparison operators usable in conditions.
enum class CompareOp : std::uint8_t { Gt, Ge, Eq, Ne, Le, Lt };

std::string_view to_string(CompareOp op);
/// The operator obtained by swapping operands (`a < b` iff `b > a`).
CompareOp mirrored(CompareOp op);

/** A single attribute value.
 *
 * `Absent` encodes "no value" for event attributes.  Two orderings exist: the *structural* order (`operator<=>`) is a
 * total order over all values used for set storage and deduplication; the *semantic* order (`compare()`) is the one
 * conditions use, where `Absent` never satisfies any comparison and mixing domains is a `TypeError`.
 *
 * Text is interned, so a `Value` is a small trivially-copyable handle.
 */
class Value
{
  public:
    struct Absent
    {
        friend bool operator==(Absent, Absent) = default;
    };
    struct Decimal
    {
        double value;
    };
    struct Timestamp
    {
        std::int64_t millis; ///< milliseconds since the Unix epoch, UTC
    };
    struct Text
    {
        const std::string *str;
    };

  private:
    std::variant<Absent, std::int64_t, Decimal, Timestamp, Text> v_;

  public:
    Value() : v_(Absent{}) { }

    static Value absent() { return Value(); }
    static Value integer(std::int64_t i);
    static Value decimal(double d);
    static Value timestamp(std::int64_t millis);
    static Value text(std::string_view s);

    bool is_absent() const { return std::holds_alternative<Absent>(v_); }
    /// The domain of a present value; `std::nullopt` for `Absent`.
    std::optional<Domain> domain() const;

    std::int64_t as_integer() const;
    double as_decimal() const;
    std::int64_t as_timestamp() const;
    std::string_view as_text() const;

    std::size_t hash() const;

    friend bool operator==(const Value &a, const Value &b);
    friend std::strong_ordering operator<=>(const Value &a, const Value &b);
};

/// Semantic comparison `lhs op rhs`.  False whenever either side is absent; throws `TypeError` across domains.
bool compare(const Value &lhs, CompareOp op, const Value &rhs);

/// Plain rendering used for table/CSV output: absent renders empty, text unquoted.
std::string to_display(const Value &v);
/// Literal rendering accepted back by the query parser (text quoted, timestamps as `HH:MM` or ISO-8601).
std::string to_literal(const Value &v);

/// Parses `HH:MM[:SS[.fff]]` (anchored to 1970-01-01) or `YYYY-MM-DD[THH:MM[:SS[.fff]]][Z]`.
std::optional<std::int64_t> parse_timestamp(std::string_view s);
std::string format_timestamp(std::int64_t millis);
std::optional<std::int64_t> parse_integer(std::string_view s);
std::optional<double> parse_decimal(std::string_view s);

/// Parses `text` as a value of domain `d`; empty text is absent.
std::optional<Value> parse_value(std::string_view text, Domain d);

struct ValueHash
{
    std::size_t operator()(const Value &v) const { return v.hash(); }
};

} // namespace dfq
