#pragma once

#include "dfq/catalog.hpp"
#include "dfq/expr.hpp"
#include "dfq/relation.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace dfq {

/// How directly-follows nodes are executed.
enum class DfStrategy : std::uint8_t {
    Native,    ///< sort by (case, time) and pair adjacent timestamp groups
    Composite, ///< execute the join/minus expansion literally
};

enum class KernelSet : std::uint8_t { Parallel, Serial };

std::string_view to_string(DfStrategy s);

struct EvalConfig
{
    DfStrategy df_strategy = DfStrategy::Native;
    bool collect_metrics = false;
    KernelSet kernels = KernelSet::Parallel;
};

/// Counters filled when `collect_metrics` is set; all zero otherwise.
struct EvalMetrics
{
    std::uint64_t tuples_read = 0;              ///< rows scanned from base relations
    std::uint64_t intermediate_tuples_peak = 0; ///< largest result of a non-root node
    std::uint64_t comparisons = 0;              ///< condition evaluations
    /** Result size per evaluated node, keyed by node path.  A composite directly-follows node at path p contributes
     * its expansion below p: p/0 is the pair join, p/1 the projected middle join, p/1/0 the middle join itself. */
    std::map<std::string, std::uint64_t> node_cardinalities;
};

/** Evaluates `e` over the relations of `cat`.  Schema errors are raised before any work is done; comparisons across
 * domains raise `TypeError`; an absent timestamp under the native strategy raises `EvalError`. */
Relation evaluate(const Expr &e, const Catalog &cat, const EvalConfig &cfg = {}, EvalMetrics *metrics = nullptr);

Relation evaluate_df_native(const Relation &log, const std::string &c, const std::string &t,
                            KernelSet kernels = KernelSet::Parallel);
Relation evaluate_df_composite(const Relation &log, const std::string &c, const std::string &t,
                               KernelSet kernels = KernelSet::Parallel, EvalMetrics *metrics = nullptr);

} // namespace dfq
