#include "dfq/parser.hpp"

#include "testkit.hpp"

#include <gtest/gtest.h>

using namespace dfq;

namespace {

const char *kExampleQueries[] = {
    "project(d.d.activity, d.u.activity, select(u.u.activity = 'reject', df(u.case, u.end_time, df(case, end_time, "
    "Log))))",
    "select(u.amount != d.amount, df(u.case, u.end_time, Log))",
    "project(u.resource, select(u.amount != d.amount, df(u.case, u.end_time, Log)))",
};

ParseError parse_error(std::string_view text)
{
    try {
        parse(text);
    } catch (const ParseError &e) {
        return e;
    }
    ADD_FAILURE() << "parsed: " << text;
    return ParseError({}, {"x"}, "");
}

} // namespace

TEST(Parser, ExampleQueriesRoundTrip)
{
    for (auto q : kExampleQueries) {
        Expr e = parse(q);
        EXPECT_EQ(parse(render(e)), e) << q;
        EXPECT_EQ(render(e), q);
    }
}

TEST(Parser, BuildsExpectedTrees)
{
    EXPECT_EQ(parse("select(case = 1, Log)"),
              Expr::select(attr_cmp("case", CompareOp::Eq, Value::integer(1)), Expr::base("Log")));
    Expr nested = parse("df(case, end_time, df(case, end_time, Log))");
    ASSERT_TRUE(nested.is<DirectlyFollows>());
    EXPECT_TRUE(nested.as<DirectlyFollows>()->child.is<DirectlyFollows>());
    Expr changed = parse("project(u.activity, select(u.amount != d.amount, df(case, end_time, Log)))");
    EXPECT_EQ(changed,
              Expr::project({"u.activity"},
                            Expr::select(attr_cmp_attr("u.amount", CompareOp::Ne, "d.amount"),
                                         Expr::df("case", "end_time", Expr::base("Log")))));
}

TEST(Parser, Literals)
{
    auto literal = [](const char *text) {
        Condition c = parse_condition(text);
        return std::get<Value>(c.as<Comparison>()->rhs);
    };
    EXPECT_EQ(literal("a = -3"), Value::integer(-3));
    EXPECT_EQ(literal("a = 2.5"), Value::decimal(2.5));
    EXPECT_EQ(literal("a = 1e3"), Value::decimal(1000));
    EXPECT_EQ(literal("a = 00:22"), Value::timestamp(22 * 60'000));
    EXPECT_EQ(literal("a = 02:04:05.5"), Value::timestamp(*parse_timestamp("02:04:05.500")));
    EXPECT_EQ(literal("a = 2011-10-01T08:00Z"), Value::timestamp(*parse_timestamp("2011-10-01T08:00:00Z")));
    EXPECT_EQ(literal("a = 'it\\'s'"), Value::text("it's"));
    EXPECT_EQ(literal("a = \"x\""), Value::text("x"));
}

TEST(Parser, OperatorPrecedence)
{
    Condition c = parse_condition("a = 1 | b = 2 & !c = 3");
    ASSERT_NE(c.as<OrCond>(), nullptr);
    EXPECT_NE(c.as<OrCond>()->rhs.as<AndCond>(), nullptr);
    EXPECT_EQ(render(parse_condition("(a = 1 | b = 2) & c = 3")), "(a = 1 | b = 2) & c = 3");
}

TEST(Parser, WhitespaceInsensitive)
{
    EXPECT_EQ(parse("  select ( case=1 ,Log )\n"), parse("select(case = 1, Log)"));
}

TEST(Parser, IdentifiersAreCaseSensitive)
{
    EXPECT_NE(parse("log"), parse("Log"));
    EXPECT_THROW(parse("SELECT(case = 1, Log)"), ParseError);
}

TEST(Parser, ErrorsCarrySpans)
{
    const char *bad[] = {"",
                         "select(case = 1 Log)",
                         "select(case = , Log)",
                         "df(case, Log)",
                         "project(Log)",
                         "join(a = b, R)",
                         "rename(a b, R)",
                         "select(a = 'open, R)",
                         "Log Log",
                         "prefix(d.x, R)",
                         "minus(R, S, T)",
                         "select(a = 1, R))",
                         "select(a ~ 1, R)"};
    for (auto text : bad) {
        ParseError e = parse_error(text);
        EXPECT_FALSE(e.expected().empty()) << text;
        EXPECT_LE(e.span().start, e.span().end);
        EXPECT_LE(e.span().end, std::string_view(text).size()) << text;
        EXPECT_FALSE(describe(e, text).empty());
    }
}

TEST(Parser, ErrorMessageNamesExpectation)
{
    ParseError e = parse_error("select(case = 1 Log)");
    EXPECT_EQ(e.span().start, 16u);
    EXPECT_EQ(e.found(), "'Log'");
    EXPECT_NE(std::string(e.what()).find("','"), std::string::npos);
}

TEST(Parser, RandomTreesRoundTrip)
{
    std::mt19937_64 rng(42);
    for (int i = 0; i < 1000; ++i) {
        Expr e = testkit::random_expr(rng);
        std::string text = render(e);
        Expr back = parse(text);
        ASSERT_EQ(back, e) << text;
        EXPECT_EQ(render(back), text);
    }
}

TEST(Render, Trivial) { EXPECT_EQ(render(Expr::base("Log")), "Log"); }

TEST(Render, Tree)
{
    EXPECT_EQ(render_tree(parse("project(u.activity, select(d.activity = 'A', df(case, end_time, Log)))")),
              "project u.activity\n"
              "  select d.activity = 'A'\n"
              "    df case, end_time\n"
              "      Log\n");
    EXPECT_EQ(render_tree(parse("join(a = b, rename(x -> a, R), prefix(p, S))")),
              "join a = b\n  rename x -> a\n    R\n  prefix p\n    S\n");
}
