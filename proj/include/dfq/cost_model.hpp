#pragma once

#include "dfq/catalog.hpp"
#include "dfq/evaluator.hpp"
#include "dfq/expr.hpp"
#include "dfq/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dfq {

/** Parameters of the block cost model.  All quantities are exact rationals; block counts are only rounded up when
 * reported. */
struct CostParams
{
    Rational N = 0;            ///< events
    Rational V = 1;            ///< cases
    Rational F = 50;           ///< tuples per block
    Rational M = 1'000'000;    ///< memory blocks
    Rational Q = Rational(1, 10); ///< default selection fraction
    Rational tuple_bytes = 80; ///< display only
    /// Strict accounting: the second join result must fit beside the resident log (M - B_Log).
    bool strict_memory = false;

    /// ceil(N / F)
    Rational log_blocks() const;
    /// Throws `InvalidArgument` unless N >= V >= 1, F >= 1, M >= 1 and 0 <= Q <= 1.
    void validate() const;
};

enum class CostComponent : std::uint8_t { Join1, Result1, Join2, Result2, Minus, Scan, Other };

std::string_view to_string(CostComponent c);

struct CostEstimate
{
    std::map<CostComponent, Rational> components;

    void add(CostComponent c, const Rational &blocks);
    void add(const CostEstimate &other);
    Rational component(CostComponent c) const;
    Rational total() const;
    /// Total rounded up to whole blocks.
    BigInt total_blocks() const;
};

/// Block nested loop join (or minus) of R (outer) and S: B_R + B_S if either fits, else B_R + (B_S / M) * B_R.
Rational bnl_cost(const Rational &b_r, const Rational &b_s, const Rational &M);

/// Pairs of events following each other directly or indirectly: V * n(n-1)/2 with n = N/V.
Rational following_pairs(const Rational &N, const Rational &V);
/// Pairs following each other indirectly: following_pairs - V(n-1), never below zero.
Rational indirect_pairs(const Rational &N, const Rational &V);

/// The five components of executing the composite directly-follows expansion.
CostEstimate composite_df_cost(const CostParams &p);

/// (N^2/V/F/M) * (N^2/V/F)
Rational order_of_cost(const CostParams &p);

enum class Sequence : std::uint8_t { SelectFirst, SelectLast };

/// Cost order of a selection combined with directly-follows, its intermediates in memory (`fits`) or on disk.
Rational table5_order(Sequence seq, bool fits, const CostParams &p);

enum class Strategy : std::uint8_t { IntermediateStorage, DatabaseConnection, NativeOperator, CompositeOperator };

std::string_view to_string(Strategy s);

struct StrategyCost
{
    Strategy strategy;
    std::string order; ///< symbolic cost order
    Rational blocks;
};

/// The four ways of obtaining directly-follows pairs, priced for a log of `B` blocks (composite uses `p` with N = B*F).
std::vector<StrategyCost> strategy_costs(const Rational &B, const CostParams &p);

/// Cost of one plan node as produced by `estimate_plan`.
struct NodeCost
{
    NodePath path;
    std::string label;
    CostEstimate own;
    Rational tuples;               ///< estimated output cardinality
    std::optional<Rational> cases; ///< estimated distinct cases, tracked through selections
    Rational width = 1;            ///< output tuple size in base tuples
    Rational blocks;               ///< output blocks
    /// For directly-follows nodes: cost order, B_in if the intermediates fit and B_in * (N_in/V_in)^2 otherwise.
    std::optional<Rational> order;
};

struct PlanEstimate
{
    CostEstimate total;
    std::vector<NodeCost> nodes; ///< pre-order
};

/** Prices a plan bottom-up.  A base relation costs its blocks; a selection directly over a base relation reads
 * `min(B, 1 + ceil(Q*N/F))`, the extra block being its index; other selections scale the cardinality by Q (the
 * measured value stored under the rendered condition in the relation's stats, else `p.Q`).  Native directly-follows
 * adds nothing beyond its input; composite adds the composite cost minus the input read.  Joins, products and set
 * operations add the block nested loop cost beyond reading their inputs.  Throws `MissingStatsError` when a
 * directly-follows node needs a case count no base relation declares. */
PlanEstimate estimate_plan(const Expr &e, const Catalog &cat, const CostParams &p,
                           DfStrategy strategy = DfStrategy::Composite);

enum class SweepAxis : std::uint8_t { EventsPerCase, N, M, Q };

std::string_view to_string(SweepAxis a);
std::optional<SweepAxis> parse_sweep_axis(std::string_view s);

struct SweepPoint
{
    Rational x;
    CostEstimate estimate;
};

/** Composite directly-follows cost as one parameter varies over `[from, to]` by `step`: events per case (N = V*x),
 * N, M, or Q (a selection keeping Q*N events of the V cases).  Throws `InvalidArgument` on an empty range. */
std::vector<SweepPoint> sweep(const CostParams &base, SweepAxis axis, const Rational &from, const Rational &to,
                              const Rational &step);

/// Indices i >= 2 where the total rises by more than twice the previous rise.
std::vector<std::size_t> detect_jumps(const std::vector<SweepPoint> &points);

/** Events per case at which the first join result, then the second join result, stops fitting in memory (the real
 * roots of 2*V*x(x-1)/2/F = M and 2*V*(x-1)(x-2)/2/F = M). */
std::pair<double, double> fit_thresholds_events_per_case(const CostParams &p);

/// Sweep rows as CSV: x, join1, result1, join2, result2, minus, total (blocks rounded up).
std::string sweep_csv(const std::vector<SweepPoint> &points);

} // namespace dfq
