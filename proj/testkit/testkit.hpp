#pragma once

#include "dfq/catalog.hpp"
#include "dfq/expr.hpp"
#include "dfq/relation.hpp"
#include "dfq/rules.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace dfq::testkit {

struct AttrSpec
{
    std::string name;
    AttrClass cls = AttrClass::Other;
    std::vector<Value> pool;  ///< candidate values, all of one domain
    double absent_rate = 0.3; ///< Other: per event.  Case: the value is never set.  Event: no event gets one.
};

struct LogSpec
{
    std::size_t cases = 6;
    std::size_t min_events = 3;
    std::size_t max_events = 3;
    double duplicate_timestamp_rate = 0.0; ///< chance an event repeats the previous event's time
    std::vector<AttrSpec> attrs;
    std::uint64_t seed = 1;
    std::string case_attr = "case";
    std::string time_attr = "time";
    bool event_ids = true; ///< adds a unique integer column `id` so no two events collapse
};

struct GeneratedLog
{
    Relation relation;
    RelationMeta meta;
};

/// Deterministic in `spec.seed`; the result satisfies its declared classes.
GeneratedLog generate_log(const LogSpec &spec);

/// Pairs (e, f) of one case with e.t < f.t and no g of that case strictly between, by plain nested loops.
Relation brute_force_df(const Relation &log, const std::string &c, const std::string &t);

Relation sample_log();
/// `df(case, end_time, Log)` of `sample_log()`.
Relation sample_log_pairs();
/// Catalog holding `sample_log()` as `Log` with case/end_time declared.
Catalog sample_catalog();

std::vector<Value> int_pool(std::int64_t lo, std::int64_t hi);

/// Uniform log of `cases` cases with exactly `per_case` events each and distinct times.
GeneratedLog uniform_log(std::size_t cases, std::size_t per_case, std::uint64_t seed = 1);

Relation random_relation(std::mt19937_64 &rng, const std::vector<std::string> &names, std::size_t max_rows,
                         std::int64_t max_value = 3, double absent_rate = 0.1);
/// Random condition over `names` (comparisons with literals and between attributes, with & | !).
Condition random_condition(std::mt19937_64 &rng, const std::vector<std::string> &names, int depth = 2);

/// Syntactically valid random tree (not necessarily well-typed) covering every operator and literal domain.
Expr random_expr(std::mt19937_64 &rng, int depth = 4);

struct RuleInstance
{
    Catalog cat;
    Expr expr;
    NodePath path;
};

/** A random instance of `rule` in direction `dir` whose side conditions hold (classes and totality are declared and
 * true of the data).  Right-to-left instances are left-to-right instances rewritten once. */
RuleInstance make_rule_instance(RuleId rule, Direction dir, std::uint64_t seed);

/// A P17 instance over a resource-style (unclassified) attribute on which both sides differ.
RuleInstance p17_counterexample();

struct LemmaInstance
{
    Relation r;
    Relation s;                     ///< a subset of r
    std::vector<std::string> key;   ///< uniquely identifies the rows of r
};

LemmaInstance make_lemma_instance(std::uint64_t seed);

} // namespace dfq::testkit
