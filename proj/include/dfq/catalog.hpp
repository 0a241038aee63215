#pragma once

#include "dfq/rational.hpp"
#include "dfq/relation.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace dfq {

class Condition;
class Expr;

/** Semantic class of an attribute with respect to the cases of its relation.
 *
 * `Case`: once an event of the case carries a value, every later event carries the same value.
 * `Event`: at most one event of each case carries a value. */
enum class AttrClass : std::uint8_t { Case, Event, Other };

std::string_view to_string(AttrClass c);
std::optional<AttrClass> parse_attr_class(std::string_view s);

struct RelationStats
{
    std::optional<std::uint64_t> events; ///< N
    std::optional<std::uint64_t> cases;  ///< V
    /// Measured selection fractions keyed by the rendered condition.
    std::map<std::string, Rational> selectivity;
};

struct RelationMeta
{
    std::map<std::string, AttrClass> attr_classes;
    std::optional<std::string> case_attr;
    std::optional<std::string> time_attr;
    RelationStats stats;
    /** Declared facts "every left tuple of this join finds a partner", each the rendered join expression. */
    std::set<std::string> totality_facts;

    AttrClass class_of(const std::string &attr) const;
};

/// Fills N (row count) and, when `case_attr` is set, V (distinct present case values).  Declared values win.
void collect_stats(const Relation &r, RelationMeta &meta);

/// Named relations plus their metadata.  Built once, then shared read-only.
class Catalog
{
    struct Entry
    {
        Relation relation;
        RelationMeta meta;
    };
    std::map<std::string, Entry, std::less<>> entries_;

  public:
    /** Registers `name`.  Base schemas may not use the reserved `d.`/`u.` prefixes (throws `InvalidArgument`). */
    void add(std::string name, Relation relation, RelationMeta meta = {});

    bool contains(std::string_view name) const { return entries_.find(name) != entries_.end(); }
    /// Throws `MissingRelationError`.
    const Relation &relation(std::string_view name) const;
    const RelationMeta &meta(std::string_view name) const;
    std::vector<std::string> names() const;

    /// True if some relation declares `join_rendering` as a totality fact.
    bool has_totality_fact(const std::string &join_rendering) const;
};

/// Exact fraction of the tuples of `r` that satisfy `cond` (0 for an empty relation).
Rational collect_selectivity(const Relation &r, const Condition &cond);

/// A point where the data contradicts a declared attribute class.
struct ClassViolation
{
    std::string attribute;
    AttrClass declared;
    Value case_value;
    Value event_time;
    std::string reason;
};

/** Checks every attribute declared `Case` or `Event` against the data.  For `Case`, ties in time may be ordered
 * freely; a violation is reported only if no tie order satisfies the class.  Requires `case_attr` and `time_attr`
 * (throws `InvalidArgument` otherwise). */
std::vector<ClassViolation> validate_classes(const Relation &r, const RelationMeta &meta);

/// Checks the totality declaration for `join(φ, L, R)` against data: every row of L joins at least one row of R.
bool check_totality(const Expr &join_expr, const Catalog &cat);

} // namespace dfq
