#include "dfq/evaluator.hpp"
#include "dfq/optimizer.hpp"
#include "dfq/parser.hpp"

#include "testkit.hpp"

#include <gtest/gtest.h>

using namespace dfq;

namespace {

Catalog declared_log(AttrClass activity_class = AttrClass::Case, bool with_data = false)
{
    Catalog cat;
    RelationMeta meta;
    meta.case_attr = "case";
    meta.time_attr = "time";
    meta.attr_classes["a"] = activity_class;
    if (with_data) {
        testkit::LogSpec spec;
        spec.cases = 40;
        spec.min_events = 2;
        spec.max_events = 8;
        spec.attrs = {{"a", activity_class, testkit::int_pool(0, 3), 0.2}};
        auto g = testkit::generate_log(spec);
        g.meta.attr_classes = meta.attr_classes;
        cat.add("Log", g.relation, g.meta);
        return cat;
    }
    meta.stats.events = 10000;
    meta.stats.cases = 500;
    cat.add("Log", Relation(Schema({{"case", Domain::Integer}, {"time", Domain::Integer}, {"a", Domain::Integer}})),
            meta);
    return cat;
}

OptimizerConfig composite_config(OptimizeMode mode = OptimizeMode::Heuristic)
{
    OptimizerConfig cfg;
    cfg.mode = mode;
    cfg.strategy = DfStrategy::Composite;
    cfg.params.F = 50;
    cfg.params.M = 200;
    cfg.params.Q = Rational(1, 10);
    return cfg;
}

const char *kSelectLast = "select(d.a = 1 & u.a = 1, df(case, time, Log))";

} // namespace

TEST(Optimizer, PushesTheSelectionBelowDirectlyFollows)
{
    Catalog cat = declared_log();
    PlanChoice c = optimize(parse(kSelectLast), cat, composite_config());
    EXPECT_EQ(render(c.chosen), "df(case, time, select(a = 1, Log))");
    ASSERT_FALSE(c.applied_rules.empty());
    EXPECT_EQ(c.applied_rules[0].rule, RuleId::P17);
    EXPECT_EQ(c.applied_rules[0].dir, Direction::RightToLeft);
    EXPECT_EQ(c.est_original.total.total(), Rational(76200));
    EXPECT_EQ(c.est_chosen.total.total(), Rational(21));
    EXPECT_TRUE(c.costed);
}

TEST(Optimizer, OtherAttributesStayPut)
{
    Catalog cat = declared_log(AttrClass::Other);
    PlanChoice c = optimize(parse(kSelectLast), cat, composite_config());
    EXPECT_EQ(c.chosen, c.original);
    ASSERT_FALSE(c.blocked.empty());
    EXPECT_EQ(c.blocked[0].rule, RuleId::P17);
    EXPECT_FALSE(c.blocked[0].reason.empty());
}

TEST(Optimizer, ChosenIsNeverWorse)
{
    Catalog cat = declared_log();
    for (const char *q : {kSelectLast, "df(case, time, Log)", "project(u.a, select(d.a = 2, df(case, time, Log)))",
                          "select(a = 1 & case = 2, Log)", "df(case, time, project(case, time, a, Log))"})
        for (auto mode : {OptimizeMode::Heuristic, OptimizeMode::Exhaustive}) {
            PlanChoice c = optimize(parse(q), cat, composite_config(mode));
            EXPECT_LE(c.est_chosen.total.total(), c.est_original.total.total()) << q;
        }
}

TEST(Optimizer, Deterministic)
{
    Catalog cat = declared_log();
    for (auto mode : {OptimizeMode::Heuristic, OptimizeMode::Exhaustive}) {
        PlanChoice a = optimize(parse(kSelectLast), cat, composite_config(mode));
        for (int i = 0; i < 5; ++i) {
            PlanChoice b = optimize(parse(kSelectLast), cat, composite_config(mode));
            EXPECT_EQ(render(a.chosen), render(b.chosen));
            EXPECT_EQ(a.est_chosen.total.total(), b.est_chosen.total.total());
            EXPECT_EQ(a.applied_rules.size(), b.applied_rules.size());
        }
    }
}

TEST(Optimizer, OffKeepsTheQuery)
{
    Catalog cat = declared_log();
    PlanChoice c = optimize(parse(kSelectLast), cat, composite_config(OptimizeMode::Off));
    EXPECT_EQ(c.chosen, c.original);
    EXPECT_TRUE(c.applied_rules.empty());
    EXPECT_EQ(c.est_chosen.total.total(), Rational(76200));
}

TEST(Optimizer, ExhaustiveFindsThePushdown)
{
    Catalog cat = declared_log();
    PlanChoice c = optimize(parse(kSelectLast), cat, composite_config(OptimizeMode::Exhaustive));
    EXPECT_EQ(c.est_chosen.total.total(), Rational(21));
    EXPECT_FALSE(c.budget_exhausted);
}

TEST(Optimizer, TinyBudgetFallsBackToGreedy)
{
    Catalog cat = declared_log();
    OptimizerConfig cfg = composite_config(OptimizeMode::Exhaustive);
    cfg.budget = 1;
    PlanChoice c = optimize(parse(kSelectLast), cat, cfg);
    EXPECT_TRUE(c.budget_exhausted);
    EXPECT_EQ(c.est_chosen.total.total(), Rational(21));
}

TEST(Optimizer, MissingStatsKeepTheOriginal)
{
    Catalog cat;
    cat.add("R", Relation(Schema({{"c", Domain::Integer}, {"t", Domain::Integer}})));
    PlanChoice c = optimize(parse("df(c, t, R)"), cat, composite_config());
    EXPECT_FALSE(c.costed);
    EXPECT_FALSE(c.cost_error.empty());
    EXPECT_EQ(c.chosen, c.original);
}

TEST(Optimizer, GreedyRewriteReachesAFixpoint)
{
    Catalog cat = declared_log();
    auto [out, steps] = greedy_rewrite(parse("select(d.a = 1 & u.a = 1 & d.case = 3, df(case, time, Log))"), cat);
    EXPECT_FALSE(steps.empty());
    auto [again, more] = greedy_rewrite(out, cat);
    EXPECT_EQ(again, out);
    EXPECT_TRUE(more.empty());
}

TEST(Optimizer, ModeNames)
{
    EXPECT_EQ(parse_optimize_mode("exhaustive"), OptimizeMode::Exhaustive);
    EXPECT_EQ(to_string(OptimizeMode::Heuristic), "heuristic");
    EXPECT_FALSE(parse_optimize_mode("fast"));
}

TEST(Optimizer, ChosenPlansEvaluateLikeTheOriginal)
{
    const char *queries[] = {kSelectLast,
                             "select(d.a = 2 | d.a = 3, df(case, time, Log))",
                             "project(u.a, select(d.a = 1 & u.a = 1, df(case, time, Log)))",
                             "select(d.a < u.a, df(case, time, Log))",
                             "df(case, time, project(case, time, a, Log))"};
    for (auto cls : {AttrClass::Case, AttrClass::Event, AttrClass::Other}) {
        Catalog cat = declared_log(cls, true);
        for (auto q : queries)
            for (auto mode : {OptimizeMode::Heuristic, OptimizeMode::Exhaustive}) {
                OptimizerConfig cfg = composite_config(mode);
                cfg.budget = 400;
                Expr e = parse(q);
                PlanChoice c = optimize(e, cat, cfg);
                EXPECT_TRUE(relation_equal(evaluate(e, cat), evaluate(c.chosen, cat)))
                    << q << " -> " << render(c.chosen);
            }
    }
}
