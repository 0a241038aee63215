#include "dfq/evaluator.hpp"
#include "dfq/parser.hpp"
#include "dfq/schema_inference.hpp"

#include "testkit.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace dfq;

namespace {

Schema schema_of(const char *query)
{
    static const Catalog cat = testkit::sample_catalog();
    return infer_schema(parse(query), cat);
}

std::set<std::string> names_of(const Schema &s)
{
    auto n = s.names();
    return {n.begin(), n.end()};
}

SchemaError schema_error(const char *query)
{
    try {
        schema_of(query);
    } catch (const SchemaError &e) {
        return e;
    }
    ADD_FAILURE() << "no schema error for " << query;
    return SchemaError(SchemaErrorKind::TypeMismatch, "");
}

void count_kinds(const Expr &e, std::map<ExprKind, int> &tree, std::map<ExprKind, std::set<const void *>> &shared)
{
    ++tree[e.kind()];
    shared[e.kind()].insert(e.identity());
    for (auto &c : e.children()) count_kinds(c, tree, shared);
}

} // namespace

TEST(SchemaInference, ProjectRestricts) { EXPECT_EQ(names_of(schema_of("project(case, Log)")), std::set<std::string>{"case"}); }

TEST(SchemaInference, RenameRelabels)
{
    EXPECT_EQ(names_of(schema_of("rename(case -> id, Log)")),
              (std::set<std::string>{"id", "activity", "start_time", "end_time"}));
}

TEST(SchemaInference, DirectlyFollowsDuplicatesEveryAttribute)
{
    Schema s = schema_of("df(case, end_time, Log)");
    EXPECT_EQ(s.names(), (std::vector<std::string>{"d.case", "d.activity", "d.start_time", "d.end_time", "u.case",
                                                   "u.activity", "u.start_time", "u.end_time"}));
}

TEST(SchemaInference, NestedDirectlyFollowsComposesPrefixes)
{
    Schema s = schema_of("df(u.case, u.end_time, df(case, end_time, Log))");
    EXPECT_EQ(s.size(), 16u);
    EXPECT_TRUE(s.contains("d.d.case"));
    EXPECT_TRUE(s.contains("u.u.end_time"));
    EXPECT_TRUE(s.contains("d.u.activity"));
}

TEST(SchemaInference, Errors)
{
    auto e = schema_error("select(amount = 1, Log)");
    EXPECT_EQ(e.kind(), SchemaErrorKind::UnknownAttribute);
    EXPECT_EQ(e.location(), NodePath{});

    e = schema_error("union(Log, project(case, Log))");
    EXPECT_EQ(e.kind(), SchemaErrorKind::SchemaMismatch);

    e = schema_error("product(Log, select(case = 1, Log))");
    EXPECT_EQ(e.kind(), SchemaErrorKind::DuplicateAttribute);

    e = schema_error("union(Log, project(nope, Log))");
    EXPECT_EQ(e.kind(), SchemaErrorKind::UnknownAttribute);
    EXPECT_EQ(e.location(), (NodePath{1}));

    e = schema_error("select(case = 'A', Log)");
    EXPECT_EQ(e.kind(), SchemaErrorKind::TypeMismatch);

    e = schema_error("rename(case -> activity, Log)");
    EXPECT_EQ(e.kind(), SchemaErrorKind::DuplicateAttribute);

    EXPECT_THROW(schema_of("df(case, end_time, Nowhere)"), MissingRelationError);
}

TEST(SchemaInference, IsIndependentOfTuples)
{
    Catalog cat;
    cat.add("Log", Relation(testkit::sample_log().schema()));
    Catalog full = testkit::sample_catalog();
    Expr e = parse("project(u.activity, df(case, end_time, Log))");
    EXPECT_EQ(infer_schema(e, cat), infer_schema(e, full));
}

TEST(ExpandDf, Structure)
{
    Catalog cat = testkit::sample_catalog();
    Expr df = parse("df(case, end_time, Log)");
    Expr x = expand_df(df, cat);
    EXPECT_FALSE(contains_kind(x, ExprKind::DirectlyFollows));
    std::map<ExprKind, int> tree;
    std::map<ExprKind, std::set<const void *>> shared;
    count_kinds(x, tree, shared);
    EXPECT_EQ(tree[ExprKind::Minus], 1);
    EXPECT_EQ(tree[ExprKind::Project], 1);
    EXPECT_EQ(tree[ExprKind::Join], 3);
    EXPECT_EQ(tree[ExprKind::RenamePrefix], 4);
    EXPECT_EQ(shared[ExprKind::Join].size(), 2u);
    EXPECT_EQ(shared[ExprKind::RenamePrefix].size(), 2u);
    EXPECT_EQ(infer_schema(x, cat), infer_schema(df, cat));
    EXPECT_THROW(expand_df(parse("Log"), cat), InvalidArgument);
}

TEST(ExpandDf, SchemaMatchesOnRandomLogs)
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        testkit::LogSpec spec;
        spec.seed = seed;
        spec.attrs = {{"a", AttrClass::Other, testkit::int_pool(0, 2)}};
        auto g = testkit::generate_log(spec);
        Catalog cat;
        cat.add("L", g.relation, g.meta);
        Expr df = parse("df(case, time, L)");
        Expr x = expand_df(df, cat);
        EXPECT_EQ(infer_schema(x, cat), infer_schema(df, cat));
        EXPECT_TRUE(relation_equal(evaluate(x, cat), evaluate(df, cat)));
    }
}

TEST(DesugarJoin, ReplacesJoins)
{
    Expr j = parse("join(r0 = s0, R, S)");
    EXPECT_EQ(render(desugar_join(j)), "select(r0 = s0, product(R, S))");
    Expr plain = parse("select(case = 1, Log)");
    EXPECT_EQ(desugar_join(plain), plain);
}

TEST(DesugarJoin, EvaluatesIdenticallyOnRandomTrees)
{
    std::mt19937_64 rng(11);
    const std::vector<std::string> r{"r0", "r1"}, s{"s0", "s1"};
    for (int i = 0; i < 100; ++i) {
        Catalog cat;
        cat.add("R", testkit::random_relation(rng, r, 5));
        cat.add("S", testkit::random_relation(rng, s, 5));
        Expr left = Expr::select(testkit::random_condition(rng, r, 1), Expr::base("R"));
        Expr right = rng() % 2 ? Expr::base("S") : Expr::project({"s0", "s1"}, Expr::base("S"));
        Expr e = Expr::join(testkit::random_condition(rng, {"r0", "r1", "s0", "s1"}, 2), left, right);
        if (rng() % 2) e = Expr::union_of(e, Expr::join(testkit::random_condition(rng, {"r1", "s1"}, 1), left, right));
        if (rng() % 2) e = Expr::project({"r0", "s1"}, e);
        Expr d = desugar_join(e);
        EXPECT_FALSE(contains_kind(d, ExprKind::Join));
        EXPECT_TRUE(relation_equal(evaluate(e, cat), evaluate(d, cat))) << render(e);
    }
}

TEST(Expr, SubtreeAndReplace)
{
    Expr e = parse("select(case = 1, df(case, end_time, Log))");
    EXPECT_EQ(render(subtree(e, {0})), "df(case, end_time, Log)");
    EXPECT_EQ(render(subtree(e, {0, 0})), "Log");
    Expr r = replace_subtree(e, {0, 0}, Expr::base("Other"));
    EXPECT_EQ(render(r), "select(case = 1, df(case, end_time, Other))");
    EXPECT_EQ(render(e), "select(case = 1, df(case, end_time, Log))");
    EXPECT_EQ(node_count(e), 3u);
}

TEST(Condition, AttrsAndSubstitute)
{
    Condition c = parse_condition("d.a = 5 & (u.a != d.b | !(x < 3))");
    EXPECT_EQ(attrs(c), (std::set<std::string>{"d.a", "u.a", "d.b", "x"}));
    EXPECT_EQ(render(substitute(c, {{"d.a", "a"}, {"x", "y"}})), "a = 5 & (u.a != d.b | !(y < 3))");
    EXPECT_EQ(conjuncts(parse_condition("a = 1 & b = 2 & c = 3")).size(), 3u);
}
