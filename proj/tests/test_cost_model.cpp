#include "dfq/cost_model.hpp"
#include "dfq/parser.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace dfq;

namespace {

CostParams section_params(Rational M = 1'000'000)
{
    CostParams p;
    p.N = 10000;
    p.V = 500;
    p.F = 50;
    p.Q = Rational(1, 10);
    p.M = M;
    return p;
}

Catalog stats_only_catalog()
{
    Catalog cat;
    RelationMeta meta;
    meta.case_attr = "case";
    meta.time_attr = "time";
    meta.stats.events = 10000;
    meta.stats.cases = 500;
    cat.add("Log", Relation(Schema({{"case", Domain::Integer}, {"time", Domain::Integer}, {"a", Domain::Integer}})),
            meta);
    return cat;
}

} // namespace

TEST(BlockNestedLoop, FitsReadsBothOnce)
{
    EXPECT_EQ(bnl_cost(200, 200, 200), Rational(400));
    EXPECT_EQ(bnl_cost(1, 1, 1), Rational(2));
    EXPECT_EQ(bnl_cost(5000, 100, 200), Rational(5100));
}

TEST(BlockNestedLoop, SpillsRescanTheOuter)
{
    EXPECT_EQ(bnl_cost(300, 500, 100), Rational(300 + 5 * 300));
    EXPECT_EQ(bnl_cost(300, 450, 200), Rational(300) + Rational(450, 200) * 300);
}

TEST(PairCounts, Formulas)
{
    EXPECT_EQ(following_pairs(10000, 500), Rational(95000));
    EXPECT_EQ(indirect_pairs(10000, 500), Rational(85500));
    EXPECT_EQ(following_pairs(18, 6), Rational(18));
    EXPECT_EQ(indirect_pairs(18, 6), Rational(6));
    EXPECT_EQ(indirect_pairs(6, 6), Rational(0));
    EXPECT_EQ(following_pairs(0, 0), Rational(0));
}

TEST(CompositeCost, ComponentsInMemory)
{
    CostEstimate e = composite_df_cost(section_params());
    EXPECT_EQ(e.component(CostComponent::Join1), Rational(200));
    EXPECT_EQ(e.component(CostComponent::Result1), Rational(0));
    EXPECT_EQ(e.component(CostComponent::Join2), Rational(0));
    EXPECT_EQ(e.component(CostComponent::Result2), Rational(0));
    EXPECT_EQ(e.component(CostComponent::Minus), Rational(0));
    EXPECT_EQ(e.total(), Rational(200));
}

TEST(CompositeCost, ComponentsWithLogSizedMemory)
{
    CostEstimate e = composite_df_cost(section_params(200));
    EXPECT_EQ(e.component(CostComponent::Join1), Rational(200));
    EXPECT_EQ(e.component(CostComponent::Result1), Rational(3800));
    EXPECT_EQ(e.component(CostComponent::Result2), Rational(3420));
    EXPECT_EQ(e.component(CostComponent::Minus), Rational(3800 + 19 * 3420));
    EXPECT_EQ(e.total(), Rational(76200));
    EXPECT_EQ(e.total_blocks(), BigInt(76200));
}

TEST(CompositeCost, StrictMemoryCanOnlyRaiseTheCost)
{
    for (int m : {100, 200, 3420, 3500, 3620, 4000, 10000}) {
        CostParams p = section_params(m);
        CostParams strict = p;
        strict.strict_memory = true;
        EXPECT_GE(composite_df_cost(strict).total(), composite_df_cost(p).total()) << m;
    }
}

TEST(CompositeCost, LogLargerThanMemory)
{
    CostEstimate e = composite_df_cost(section_params(100));
    EXPECT_EQ(e.component(CostComponent::Join1), Rational(200 + 2 * 200));
    EXPECT_EQ(e.component(CostComponent::Join2), Rational(200) + Rational(3800, 100) * 200);
}

TEST(CostOrder, OrderOfCost)
{
    EXPECT_EQ(order_of_cost(section_params(200)), Rational(80000));
    CostParams p = section_params(1);
    EXPECT_EQ(order_of_cost(p), Rational(16'000'000));
}

TEST(CostOrder, SelectionPlacement)
{
    CostParams p = section_params();
    EXPECT_EQ(table5_order(Sequence::SelectFirst, true, p), Rational(20));
    EXPECT_EQ(table5_order(Sequence::SelectFirst, false, p), Rational(8000));
    EXPECT_EQ(table5_order(Sequence::SelectLast, true, p), Rational(200));
    EXPECT_EQ(table5_order(Sequence::SelectLast, false, p), Rational(80000));
}

TEST(Strategies, CompareForArbitraryBlocks)
{
    CostParams p = section_params(200);
    for (int b : {1, 7, 200, 1234}) {
        auto s = strategy_costs(b, p);
        ASSERT_EQ(s.size(), 4u);
        EXPECT_EQ(s[0].blocks, Rational(3 * b));
        EXPECT_EQ(s[1].blocks, Rational(b));
        EXPECT_EQ(s[2].blocks, Rational(b));
        CostParams q = p;
        q.N = Rational(b) * p.F;
        EXPECT_EQ(s[3].blocks, composite_df_cost(q).total());
        EXPECT_EQ(s[3].strategy, Strategy::CompositeOperator);
    }
    EXPECT_EQ(strategy_costs(200, p)[3].blocks, Rational(76200));
}

TEST(Params, Validation)
{
    EXPECT_NO_THROW(section_params().validate());
    CostParams p = section_params();
    p.V = 0;
    EXPECT_THROW(p.validate(), InvalidArgument);
    p = section_params();
    p.N = 10;
    EXPECT_THROW(p.validate(), InvalidArgument);
    p = section_params();
    p.Q = 2;
    EXPECT_THROW(p.validate(), InvalidArgument);
    p = section_params();
    p.F = 0;
    EXPECT_THROW(p.validate(), InvalidArgument);
    EXPECT_EQ(section_params().log_blocks(), Rational(200));
}

TEST(EstimatePlan, NativeReadsTheLogOnce)
{
    Catalog cat = stats_only_catalog();
    auto est = estimate_plan(parse("df(case, time, Log)"), cat, section_params(200), DfStrategy::Native);
    EXPECT_EQ(est.total.total(), Rational(200));
    ASSERT_TRUE(est.nodes[0].order);
    EXPECT_EQ(*est.nodes[0].order, Rational(200));
    EXPECT_EQ(est.nodes[0].tuples, Rational(9500));
}

TEST(EstimatePlan, SelectFirstUsesTheIndex)
{
    Catalog cat = stats_only_catalog();
    Expr e = parse("df(case, time, select(a = 1, Log))");
    for (auto s : {DfStrategy::Native, DfStrategy::Composite})
        EXPECT_EQ(estimate_plan(e, cat, section_params(200), s).total.total(), Rational(21));
    auto est = estimate_plan(e, cat, section_params(200), DfStrategy::Composite);
    EXPECT_EQ(*est.nodes[0].order, Rational(20));
}

TEST(EstimatePlan, SelectLastPaysTheComposite)
{
    Catalog cat = stats_only_catalog();
    Expr e = parse("select(d.a = 1 & u.a = 1, df(case, time, Log))");
    auto est = estimate_plan(e, cat, section_params(200), DfStrategy::Composite);
    EXPECT_EQ(est.total.total(), Rational(76200));
    EXPECT_NEAR(to_double(est.total.total()), 95000, 0.25 * 95000);
    EXPECT_EQ(*est.nodes[1].order, Rational(80000));
    EXPECT_EQ(est.nodes[1].path, (NodePath{0}));
    EXPECT_EQ(estimate_plan(e, cat, section_params(200), DfStrategy::Native).total.total(), Rational(200));
}

TEST(EstimatePlan, MeasuredSelectivityWins)
{
    Catalog cat;
    RelationMeta meta;
    meta.case_attr = "case";
    meta.stats.events = 10000;
    meta.stats.cases = 500;
    meta.stats.selectivity["a = 1"] = Rational(1, 2);
    cat.add("Log", Relation(Schema({{"case", Domain::Integer}, {"time", Domain::Integer}, {"a", Domain::Integer}})),
            meta);
    auto est = estimate_plan(parse("select(a = 1, Log)"), cat, section_params(200));
    EXPECT_EQ(est.nodes[0].tuples, Rational(5000));
    EXPECT_EQ(est.total.total(), Rational(101));
}

TEST(EstimatePlan, MissingCaseCount)
{
    Catalog cat;
    cat.add("R", Relation(Schema({{"c", Domain::Integer}, {"t", Domain::Integer}})));
    EXPECT_THROW(estimate_plan(parse("df(c, t, R)"), cat, section_params()), MissingStatsError);
    EXPECT_NO_THROW(estimate_plan(parse("select(c = 1, R)"), cat, section_params()));
}

TEST(EstimatePlan, JoinsAddNestedLoopWork)
{
    Catalog cat = stats_only_catalog();
    auto est = estimate_plan(parse("join(a = b, Log, rename(a -> b, project(a, Log)))"), cat, section_params(100));
    EXPECT_EQ(est.total.total(), Rational(200 + 200 + 200));
    EXPECT_EQ(est.nodes[0].tuples, Rational(10000) * 10000 / 10);
}

TEST(Sweep, TwoJumpsAtTheFitThresholds)
{
    CostParams p;
    p.V = 1'000'000;
    p.N = p.V;
    p.F = 50;
    p.M = 1'000'000;
    p.tuple_bytes = 80;
    auto pts = sweep(p, SweepAxis::EventsPerCase, 2, 20, 1);
    auto jumps = detect_jumps(pts);
    ASSERT_EQ(jumps.size(), 2u);
    auto [x1, x2] = fit_thresholds_events_per_case(p);
    EXPECT_LE(std::abs(to_double(pts[jumps[0]].x) - x1), 1.0);
    EXPECT_LE(std::abs(to_double(pts[jumps[1]].x) - x2), 1.0);
    EXPECT_EQ(pts[jumps[0]].x, Rational(8));
    EXPECT_EQ(pts[jumps[1]].x, Rational(9));
}

TEST(Sweep, MonotoneInEventsAndInverseInMemory)
{
    CostParams p = section_params(200);
    auto n = sweep(p, SweepAxis::N, 1000, 20000, 1000);
    for (std::size_t i = 1; i < n.size(); ++i) EXPECT_GE(n[i].estimate.total(), n[i - 1].estimate.total());
    auto m = sweep(p, SweepAxis::M, 50, 5000, 50);
    for (std::size_t i = 1; i < m.size(); ++i) EXPECT_LE(m[i].estimate.total(), m[i - 1].estimate.total());
    auto q = sweep(p, SweepAxis::Q, Rational(1, 10), 1, Rational(1, 10));
    EXPECT_EQ(q.size(), 10u);
    for (std::size_t i = 1; i < q.size(); ++i) EXPECT_GE(q[i].estimate.total(), q[i - 1].estimate.total());
    EXPECT_EQ(q.back().estimate.total(), Rational(76200));
}

TEST(Sweep, Csv)
{
    auto pts = sweep(section_params(200), SweepAxis::N, 10000, 10000, 1);
    EXPECT_EQ(sweep_csv(pts), "x,join1,result1,join2,result2,minus,total\n10000,200,3800,0,3420,68780,76200\n");
    EXPECT_THROW(sweep(section_params(), SweepAxis::N, 2, 1, 1), InvalidArgument);
    EXPECT_THROW(sweep(section_params(), SweepAxis::N, 1, 2, 0), InvalidArgument);
    EXPECT_EQ(parse_sweep_axis("events_per_case"), SweepAxis::EventsPerCase);
    EXPECT_FALSE(parse_sweep_axis("bogus"));
}

TEST(Rationals, Parse)
{
    EXPECT_EQ(parse_rational("0.1"), Rational(1, 10));
    EXPECT_EQ(parse_rational("1e6"), Rational(1'000'000));
    EXPECT_EQ(parse_rational("3/4"), Rational(3, 4));
    EXPECT_EQ(parse_rational("-2"), Rational(-2));
    EXPECT_FALSE(parse_rational("x"));
    EXPECT_FALSE(parse_rational("1/0"));
}
