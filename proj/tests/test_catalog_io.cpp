#include "dfq/catalog.hpp"
#include "dfq/csv.hpp"
#include "dfq/parser.hpp"

#include "testkit.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace dfq;

namespace {

const std::filesystem::path kData = DFQ_TEST_DATA;

RelationMeta meta_with(std::map<std::string, AttrClass> classes)
{
    RelationMeta m;
    m.case_attr = "case";
    m.time_attr = "t";
    m.attr_classes = std::move(classes);
    return m;
}

Relation case_log(std::initializer_list<std::tuple<int, int, std::optional<int>>> rows)
{
    Schema s({{"case", Domain::Integer}, {"t", Domain::Integer}, {"a", Domain::Integer}});
    std::vector<std::vector<Value>> out;
    for (auto &[c, t, a] : rows) out.push_back({Value::integer(c), Value::integer(t), a ? Value::integer(*a) : Value()});
    return Relation::from_rows(s, out);
}

} // namespace

TEST(Csv, LoadsSampleLog)
{
    CsvOptions opt;
    opt.case_attr = "case";
    opt.time_attr = "end_time";
    LoadedRelation l = load_csv(kData / "sample_log.csv", opt);
    EXPECT_TRUE(relation_equal(l.relation, testkit::sample_log()));
    EXPECT_EQ(l.meta.stats.events, 18u);
    EXPECT_EQ(l.meta.stats.cases, 6u);
    EXPECT_TRUE(l.warnings.empty());
    EXPECT_EQ(l.relation.schema()[l.relation.schema().index_of("end_time")].domain, Domain::Timestamp);
    EXPECT_EQ(l.relation.schema()[l.relation.schema().index_of("case")].domain, Domain::Integer);
}

TEST(Csv, DuplicateRowsAreDroppedWithAWarning)
{
    LoadedRelation l = load_csv(kData / "sample_log_duplicate.csv");
    EXPECT_EQ(l.relation.size(), 18u);
    EXPECT_EQ(l.duplicates_dropped, 1u);
    ASSERT_EQ(l.warnings.size(), 1u);
    EXPECT_NE(l.warnings[0].find("duplicate"), std::string::npos);
}

TEST(Csv, HeaderOnly)
{
    LoadedRelation l = parse_csv("case,activity\n");
    EXPECT_EQ(l.relation.size(), 0u);
    EXPECT_EQ(l.relation.schema().size(), 2u);
}

TEST(Csv, InfersDomainsAndAbsentCells)
{
    LoadedRelation l = parse_csv("i,d,t,s\n1,2.5,00:01,x\n,3,2011-10-01T00:00:00Z,\n");
    const Schema &s = l.relation.schema();
    EXPECT_EQ(s[s.index_of("i")].domain, Domain::Integer);
    EXPECT_EQ(s[s.index_of("d")].domain, Domain::Decimal);
    EXPECT_EQ(s[s.index_of("t")].domain, Domain::Timestamp);
    EXPECT_EQ(s[s.index_of("s")].domain, Domain::Text);
    EXPECT_EQ(l.relation.size(), 2u);
    bool absent = false;
    for (std::size_t r = 0; r < l.relation.size(); ++r) absent |= l.relation.row(r)[s.index_of("i")].is_absent();
    EXPECT_TRUE(absent);
}

TEST(Csv, QuotedFields)
{
    auto recs = parse_csv_records("a,b\n\"x,y\",\"say \"\"hi\"\"\"\n\"multi\nline\",2\n");
    ASSERT_EQ(recs.size(), 3u);
    EXPECT_EQ(recs[1][0], "x,y");
    EXPECT_EQ(recs[1][1], "say \"hi\"");
    EXPECT_EQ(recs[2][0], "multi\nline");
}

TEST(Csv, Errors)
{
    EXPECT_THROW(parse_csv(""), CsvError);
    EXPECT_THROW(parse_csv("a,b\n1\n"), CsvError);
    CsvOptions opt;
    opt.types["a"] = Domain::Integer;
    EXPECT_THROW(parse_csv("a\nx\n", opt), CsvError);
    opt.types = {{"zz", Domain::Integer}};
    EXPECT_THROW(parse_csv("a\n1\n", opt), CsvError);
    EXPECT_THROW(load_csv(kData / "nope.csv"), CsvError);
}

TEST(Sidecar, Parses)
{
    Sidecar sc = parse_sidecar("# log\nname=Log\ncsv=x.csv\ncase_attr=case\ntime_attr=end_time\nclass.amount=case\n"
                               "class.decision=event\ntype.amount=decimal\ntotality=join(a=b, R, S)\nstats.N=10000\n"
                               "stats.V=500\n",
                               "/base");
    EXPECT_EQ(sc.name, "Log");
    EXPECT_EQ(sc.csv, std::filesystem::path("/base/x.csv"));
    EXPECT_EQ(sc.meta.case_attr, "case");
    EXPECT_EQ(sc.meta.class_of("amount"), AttrClass::Case);
    EXPECT_EQ(sc.meta.class_of("decision"), AttrClass::Event);
    EXPECT_EQ(sc.meta.class_of("resource"), AttrClass::Other);
    EXPECT_EQ(sc.options.types.at("amount"), Domain::Decimal);
    EXPECT_TRUE(sc.meta.totality_facts.contains("join(a = b, R, S)"));
    EXPECT_EQ(sc.meta.stats.events, 10000u);
    EXPECT_EQ(sc.meta.stats.cases, 500u);
}

TEST(Sidecar, RejectsBadLines)
{
    EXPECT_THROW(parse_sidecar("nonsense"), CsvError);
    EXPECT_THROW(parse_sidecar("class.a=sometimes"), CsvError);
    EXPECT_THROW(parse_sidecar("stats.N=-1"), CsvError);
    EXPECT_THROW(parse_sidecar("color=blue"), CsvError);
    EXPECT_THROW(parse_sidecar("totality=join(a = , R, S)"), CsvError);
}

TEST(Catalog, LoadsSidecarAndDirectory)
{
    Catalog cat;
    load_catalog_path(cat, kData / "sample_log.meta");
    EXPECT_TRUE(cat.contains("Log"));
    EXPECT_EQ(cat.meta("Log").time_attr, "end_time");
    EXPECT_EQ(cat.meta("Log").class_of("activity"), AttrClass::Other);

    Catalog dir;
    std::vector<std::string> warnings;
    load_catalog_path(dir, kData, &warnings);
    EXPECT_TRUE(dir.contains("Log"));
    EXPECT_TRUE(dir.contains("sample_log_duplicate"));
    EXPECT_FALSE(dir.contains("sample_log"));
    EXPECT_EQ(warnings.size(), 1u);
}

TEST(Catalog, MissingRelation)
{
    Catalog cat = testkit::sample_catalog();
    EXPECT_THROW(cat.relation("Other"), MissingRelationError);
    EXPECT_EQ(cat.names(), std::vector<std::string>{"Log"});
}

TEST(Catalog, RejectsReservedNames)
{
    Catalog cat;
    EXPECT_THROW(cat.add("X", Relation(Schema({{"u.a", Domain::Integer}}))), InvalidArgument);
}

TEST(Stats, DeclaredValuesWin)
{
    RelationMeta m;
    m.case_attr = "case";
    m.stats.cases = 500;
    collect_stats(testkit::sample_log(), m);
    EXPECT_EQ(m.stats.events, 18u);
    EXPECT_EQ(m.stats.cases, 500u);
}

TEST(Stats, Selectivity)
{
    Relation log = testkit::sample_log();
    EXPECT_EQ(collect_selectivity(log, parse_condition("case = 1")), Rational(3, 18));
    EXPECT_EQ(collect_selectivity(log, parse_condition("activity = 'A' | activity = 'E'")), Rational(12, 18));
    EXPECT_EQ(collect_selectivity(log, parse_condition("activity = 'B' | case = 2")), Rational(6, 18));
    EXPECT_EQ(collect_selectivity(Relation(log.schema()), parse_condition("case = 1")), Rational(0));
}

TEST(Validate, CaseAttribute)
{
    auto ok = case_log({{1, 1, {}}, {1, 2, 7}, {1, 3, 7}, {2, 1, 3}, {2, 2, 3}});
    EXPECT_TRUE(validate_classes(ok, meta_with({{"a", AttrClass::Case}})).empty());

    auto changes = case_log({{1, 1, 7}, {1, 2, 8}});
    auto v = validate_classes(changes, meta_with({{"a", AttrClass::Case}}));
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].attribute, "a");
    EXPECT_EQ(v[0].case_value, Value::integer(1));
    EXPECT_EQ(v[0].event_time, Value::integer(2));

    auto vanishes = case_log({{1, 1, 7}, {1, 2, {}}});
    EXPECT_EQ(validate_classes(vanishes, meta_with({{"a", AttrClass::Case}})).size(), 1u);
}

TEST(Validate, CaseAttributeTiesMayBeReordered)
{
    auto tied = case_log({{1, 1, {}}, {1, 1, 7}, {1, 2, 7}});
    EXPECT_TRUE(validate_classes(tied, meta_with({{"a", AttrClass::Case}})).empty());
}

TEST(Validate, EventAttribute)
{
    auto ok = case_log({{1, 1, {}}, {1, 2, 7}, {1, 3, {}}, {2, 1, 4}});
    EXPECT_TRUE(validate_classes(ok, meta_with({{"a", AttrClass::Event}})).empty());
    auto twice = case_log({{1, 1, 7}, {1, 2, {}}, {1, 3, 7}});
    auto v = validate_classes(twice, meta_with({{"a", AttrClass::Event}}));
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].declared, AttrClass::Event);
    EXPECT_EQ(v[0].event_time, Value::integer(3));
}

TEST(Validate, NeedsCaseAndTime)
{
    RelationMeta m;
    EXPECT_THROW(validate_classes(testkit::sample_log(), m), InvalidArgument);
}

TEST(Totality, CheckedAgainstData)
{
    Catalog cat;
    Schema r({{"r0", Domain::Integer}}), s({{"s0", Domain::Integer}});
    cat.add("R", Relation::from_rows(r, {{Value::integer(1)}, {Value::integer(2)}}));
    cat.add("S", Relation::from_rows(s, {{Value::integer(1)}, {Value::integer(2)}, {Value::integer(3)}}));
    cat.add("T", Relation::from_rows(s, {{Value::integer(1)}}));
    EXPECT_TRUE(check_totality(parse("join(r0 = s0, R, S)"), cat));
    EXPECT_FALSE(check_totality(parse("join(r0 = s0, R, T)"), cat));
    EXPECT_THROW(check_totality(parse("R"), cat), InvalidArgument);
}

TEST(Totality, FactsAreLookedUpByRendering)
{
    Catalog cat;
    RelationMeta m;
    m.totality_facts.insert(render(parse("join(r0=s0, R, S)")));
    cat.add("S", Relation(Schema({{"s0", Domain::Integer}})), m);
    EXPECT_TRUE(cat.has_totality_fact("join(r0 = s0, R, S)"));
    EXPECT_FALSE(cat.has_totality_fact("join(r0 = s0, S, R)"));
}
