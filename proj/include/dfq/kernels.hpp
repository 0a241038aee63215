#pragma once

#include "dfq/condition.hpp"
#include "dfq/relation.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dfq::kernels {

struct Counters
{
    std::uint64_t comparisons = 0; ///< predicate evaluations
};

/** A condition compiled against a schema: attribute references become column indices.  When evaluated over a pair of
 * rows, indices at or past the first row's arity address the second row. */
class BoundCondition
{
    struct Side
    {
        int column = -1; ///< -1 means `literal`
        Value literal;
    };
    struct Node
    {
        enum Kind : std::uint8_t { Cmp, And, Or, Not } kind;
        CompareOp op = CompareOp::Eq;
        Side lhs, rhs;
        int a = -1, b = -1; ///< child nodes
    };
    std::vector<Node> nodes_;
    int root_ = -1;

    int compile(const Condition &c, const Schema &schema);
    bool eval(int node, Row left, Row right) const;

  public:
    BoundCondition(const Condition &c, const Schema &schema);

    bool operator()(Row r) const { return eval(root_, r, {}); }
    bool operator()(Row left, Row right) const { return eval(root_, left, right); }
};

/// Equality conjuncts of `cond` linking a `left` column to a `right` column, as (left index, right index) pairs.
std::vector<std::pair<std::size_t, std::size_t>> equi_keys(const Condition &cond, const Schema &left,
                                                           const Schema &right);

// Shared by both kernel sets.
Relation project(const Relation &r, const std::vector<std::string> &attrs);
Relation rename(const Relation &r, const std::string &from, const std::string &to);
Relation prefix(const Relation &r, const std::string &prefix);
Relation set_union(const Relation &l, const Relation &r);
Relation set_intersect(const Relation &l, const Relation &r);
Relation set_minus(const Relation &l, const Relation &r);
/// Schema of a directly-follows result over `s`.
Schema df_schema(const Schema &s);

/// Reference kernels: single-threaded nested loops.
namespace serial {

Relation select(const Relation &r, const Condition &cond, Counters &counters);
Relation product(const Relation &l, const Relation &r);
Relation join(const Condition &cond, const Relation &l, const Relation &r, Counters &counters);
/// Throws `EvalError` if a present-case event has an absent timestamp.
Relation df_native(const Relation &log, const std::string &c, const std::string &t);

} // namespace serial

/// OpenMP kernels; joins hash on equality conjuncts.
namespace parallel {

Relation select(const Relation &r, const Condition &cond, Counters &counters);
Relation product(const Relation &l, const Relation &r);
Relation join(const Condition &cond, const Relation &l, const Relation &r, Counters &counters);
Relation df_native(const Relation &log, const std::string &c, const std::string &t);

} // namespace parallel

} // namespace dfq::kernels
