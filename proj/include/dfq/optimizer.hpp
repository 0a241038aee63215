#pragma once

#include "dfq/catalog.hpp"
#include "dfq/cost_model.hpp"
#include "dfq/expr.hpp"
#include "dfq/rules.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dfq {

enum class OptimizeMode : std::uint8_t { Off, Heuristic, Exhaustive };

std::string_view to_string(OptimizeMode m);
std::optional<OptimizeMode> parse_optimize_mode(std::string_view s);

struct AppliedRule
{
    RuleId rule;
    Direction dir;
    NodePath path;
};

/// A rule whose pattern matched but whose side condition did not hold.
struct BlockedRule
{
    RuleId rule;
    Direction dir;
    NodePath path;
    std::string reason;
};

struct PlanChoice
{
    Expr original;
    Expr chosen;
    std::vector<AppliedRule> applied_rules; ///< replaying these on `original` yields `chosen`
    PlanEstimate est_original;
    PlanEstimate est_chosen;
    std::vector<BlockedRule> blocked;
    bool budget_exhausted = false;
    /// False if a directly-follows input had no case count; `chosen` is then `original` and both estimates are empty.
    bool costed = true;
    std::string cost_error;
};

struct OptimizerConfig
{
    OptimizeMode mode = OptimizeMode::Heuristic;
    std::size_t budget = 10'000; ///< node visits in exhaustive mode
    CostParams params;
    DfStrategy strategy = DfStrategy::Native;
};

/** Heuristic mode applies `greedy_rules()` at the first matching node in pre-order until none applies, then keeps the
 * result if it is not estimated dearer.  Exhaustive mode explores every tree reachable by `all_rules()` breadth-first
 * until `budget` node visits, also running the greedy pass if the budget runs out, and keeps the cheapest tree; ties go
 * to fewer nodes, then the smaller rendering.  Never throws for budget exhaustion or missing statistics. */
PlanChoice optimize(const Expr &e, const Catalog &cat, const OptimizerConfig &cfg = {});

/// Greedy pass alone: the rewritten tree and the steps taken.
std::pair<Expr, std::vector<AppliedRule>> greedy_rewrite(const Expr &e, const Catalog &cat,
                                                        std::vector<BlockedRule> *blocked = nullptr);

} // namespace dfq
