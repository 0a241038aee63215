#pragma once

#include "dfq/catalog.hpp"
#include "dfq/errors.hpp"
#include "dfq/expr.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dfq {

/** Rewrite rules.  E1-E16 are the classical equivalences, P17/P18 move selections across directly-follows, P20 moves
 * a theta join across it, DFP moves a projection across it. */
enum class RuleId : std::uint8_t {
    E1,  ///< select(p & q, R) = select(p, select(q, R))
    E2,  ///< select(p, select(q, R)) = select(q, select(p, R))
    E3,  ///< join(p, R, S) = join(p, S, R)
    E4,  ///< join(q, join(p, R, S), T) = join(p, R, join(q, S, T))
    E5,  ///< select(q, join(p, R, S)) = join(p, select(q, R), S), q over R only
    E6,  ///< select(q, minus(R, S)) = minus(select(q, R), select(q, S))
    E7,  ///< select(p, rename(b -> a, R)) = rename(b -> a, select(p[a/b], R))
    E8,  ///< project(A, rename(b -> a, R)) = rename(b -> a, project(A[a/b], R))
    E9,  ///< project(A, select(p, R)) = select(p, project(A, R)), p over A only
    E10, ///< project(A, join(p, R, S)) = join(p, project(A∩R, R), project(A∩S, S)), p over A only
    E11, ///< project(A, project(B, R)) = project(A, R)
    E12, ///< project(A, project(B, R)) = project(B, project(A, R)), A and B the same set
    E13, ///< rename(b -> a, join(p, R, S)) = join(p[a/b], rename(b -> a, R), S), b in R
    E14, ///< project(A, R) = R, A all of R
    E15, ///< project(A, join(p, R, S)) = R, A all of R and every R tuple joins
    E16, ///< join(p, minus(R, T), S) = minus(join(p, R, S), join(p, T, S))
    P17, ///< df(c, t, select(p(a), L)) = select(p(d.a) & p(u.a), df(c, t, L)), a a case or event attribute
    P18, ///< df(c, t, select(a θ b, L)) = select(d.a θ d.b & d.a θ u.b & u.a θ d.b & u.a θ u.b, df(c, t, L))
    P20, ///< df(c, t, join(p, R, S)) = join(p(u.), join(p(d.), df(c, t, R), prefix(d, S)), prefix(u, S))
    DFP, ///< df(c, t, project(A, L)) = project(d.A, u.A, df(c, t, L)), c and t in A
};

inline constexpr std::size_t kRuleCount = 20;

std::string_view to_string(RuleId r);
std::optional<RuleId> parse_rule_id(std::string_view s);
/// Short name, e.g. "directly follows and selection commute".
std::string_view rule_title(RuleId r);

enum class Direction : std::uint8_t { LeftToRight, RightToLeft };

std::string_view to_string(Direction d);

struct RuleSpec
{
    RuleId id;
    Direction dir;
};

/// Every registered (rule, direction), in a fixed order.
const std::vector<RuleSpec> &all_rules();
/// The pushdown subset applied to fixpoint by the greedy pass, in priority order.
const std::vector<RuleSpec> &greedy_rules();

class PatternMismatch : public Error
{
  public:
    using Error::Error;
};

/// A rule matched but a side condition could not be established; `fact()` names what is missing.
class SideConditionUnverified : public Error
{
    std::string fact_;

  public:
    explicit SideConditionUnverified(std::string fact)
        : Error("side condition not met: " + fact)
        , fact_(std::move(fact))
    { }
    const std::string &fact() const { return fact_; }
};

/** Rewrites the node at `path` of `root` and returns the new root.  Throws `PatternMismatch` if the node does not have
 * the rule's shape and `SideConditionUnverified` if it does but the catalog does not back the rule's side conditions
 * or the rewritten node would not be well-formed with an unchanged schema. */
Expr apply_rule(RuleId rule, Direction dir, const Expr &root, const NodePath &path, const Catalog &cat);

/// `apply_rule` that reports mismatches as `std::nullopt` (side-condition failures still throw).
std::optional<Expr> try_apply_rule(RuleId rule, Direction dir, const Expr &root, const NodePath &path,
                                   const Catalog &cat);

/** Rewrites by shape alone (class and totality declarations are not consulted) and evaluates the node before and
 * after on the catalog's data.  True iff both agree.  Throws `PatternMismatch` as `apply_rule`. */
bool verify_rule_on_instance(RuleId rule, Direction dir, const Expr &root, const NodePath &path, const Catalog &cat);

} // namespace dfq
