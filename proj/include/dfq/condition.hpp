#pragma once

#include "dfq/value.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace dfq {

/// Names an attribute inside a condition.
struct AttrRef
{
    std::string name;
    friend bool operator==(const AttrRef &, const AttrRef &) = default;
};

using Operand = std::variant<AttrRef, Value>;

class Condition;

struct Comparison;
struct AndCond;
struct OrCond;
struct NotCond;

/** Boolean formula over binary comparisons, built with conjunction, disjunction and negation.  Immutable and cheap to
 * copy (shared tree). */
class Condition
{
  public:
    using Node = std::variant<Comparison, AndCond, OrCond, NotCond>;

  private:
    std::shared_ptr<const Node> node_;
    explicit Condition(std::shared_ptr<const Node> n) : node_(std::move(n)) { }

  public:
    static Condition compare(Operand lhs, CompareOp op, Operand rhs);
    static Condition conj(Condition lhs, Condition rhs);
    static Condition disj(Condition lhs, Condition rhs);
    static Condition negate(Condition c);
    /// Left-nested conjunction of `parts` (non-empty).
    static Condition all_of(const std::vector<Condition> &parts);

    const Node &node() const;
    template<typename T>
    const T *as() const;
    const void *identity() const { return node_.get(); }

    friend bool operator==(const Condition &a, const Condition &b);
};

struct Comparison
{
    Operand lhs;
    CompareOp op;
    Operand rhs;
};

struct AndCond
{
    Condition lhs, rhs;
};

struct OrCond
{
    Condition lhs, rhs;
};

struct NotCond
{
    Condition operand;
};

inline const Condition::Node &Condition::node() const { return *node_; }

template<typename T>
const T *Condition::as() const
{
    return std::get_if<T>(node_.get());
}

/// Shorthand for `attr op value`.
Condition attr_cmp(std::string attr, CompareOp op, Value value);
/// Shorthand for `lhs op rhs` over two attributes.
Condition attr_cmp_attr(std::string lhs, CompareOp op, std::string rhs);

/// The attribute names mentioned anywhere in `c`.
std::set<std::string> attrs(const Condition &c);

/// `c` with every attribute renamed per `mapping` (names not in the map are kept).
Condition substitute(const Condition &c, const std::map<std::string, std::string> &mapping);

/// Top-level conjuncts of `c` (a non-conjunction yields itself).
std::vector<Condition> conjuncts(const Condition &c);

/// Infix rendering, `&` binding tighter than `|`; round-trips through the parser.
std::string render(const Condition &c);

} // namespace dfq
