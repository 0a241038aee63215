#include "dfq/catalog.hpp"
#include "dfq/cost_model.hpp"
#include "dfq/csv.hpp"
#include "dfq/evaluator.hpp"
#include "dfq/kernels.hpp"
#include "dfq/optimizer.hpp"
#include "dfq/parser.hpp"
#include "dfq/rules.hpp"

#include "cli.hpp"
#include "testkit.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace dfq;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome
{
    bool pass;
    std::string detail;
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

CostParams worked_params()
{
    CostParams p;
    p.N = 10000;
    p.V = 500;
    p.F = 50;
    p.Q = Rational(1, 10);
    return p;
}

Outcome sample_pairs()
{
    auto start = Clock::now();
    Catalog cat;
    load_catalog_path(cat, std::filesystem::path(DFQ_TEST_DATA) / "sample_log.meta");
    Expr q = parse("df(case, end_time, Log)");
    Relation expected = testkit::sample_log_pairs();
    bool ok = expected.size() == 12;
    for (auto s : {DfStrategy::Native, DfStrategy::Composite})
        for (auto k : {KernelSet::Parallel, KernelSet::Serial})
            ok = ok and relation_equal(evaluate(q, cat, {s, false, k}), expected);
    double t = seconds_since(start);
    return {ok and t < 1.0, "12 pairs under both engines in " + std::to_string(t) + " s"};
}

Outcome oracle_equivalence()
{
    auto start = Clock::now();
    int agreed = 0;
    const int logs = 1000;
    for (int seed = 1; seed <= logs; ++seed) {
        testkit::LogSpec spec;
        spec.seed = std::uint64_t(seed);
        spec.cases = 1 + seed % 8;
        spec.min_events = 0;
        spec.max_events = 1 + (seed / 8) % 12;
        spec.duplicate_timestamp_rate = 0.1;
        spec.attrs = {{"a", AttrClass::Other, testkit::int_pool(0, 3)}};
        auto g = testkit::generate_log(spec);
        Relation oracle = testkit::brute_force_df(g.relation, "case", "time");
        agreed += relation_equal(oracle, evaluate_df_native(g.relation, "case", "time")) and
                  relation_equal(oracle, evaluate_df_composite(g.relation, "case", "time"));
    }
    double t = seconds_since(start);
    return {agreed == logs and t < 60.0,
            std::to_string(agreed) + "/" + std::to_string(logs) + " logs agree in " + std::to_string(t) + " s"};
}

Outcome rule_soundness()
{
    int failures = 0, checked = 0;
    std::string first;
    for (auto &spec : all_rules()) {
        if (spec.id == RuleId::DFP) continue;
        for (std::uint64_t seed = 1; seed <= 200; ++seed) {
            auto inst = testkit::make_rule_instance(spec.id, spec.dir, seed);
            Expr after = apply_rule(spec.id, spec.dir, inst.expr, inst.path, inst.cat);
            ++checked;
            if (not relation_equal(evaluate(inst.expr, inst.cat), evaluate(after, inst.cat))) {
                if (not failures++) first = std::string(to_string(spec.id)) + " " + std::string(to_string(spec.dir));
            }
        }
    }
    int lemma_ok = 0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        auto l = testkit::make_lemma_instance(seed);
        lemma_ok += relation_equal(kernels::project(kernels::set_minus(l.r, l.s), l.key),
                                   kernels::set_minus(kernels::project(l.r, l.key), kernels::project(l.s, l.key)));
    }
    std::string detail = std::to_string(checked - failures) + "/" + std::to_string(checked) + " rule instances, " +
                         std::to_string(lemma_ok) + "/200 projection-minus instances";
    if (failures) detail += ", first failure " + first;
    return {failures == 0 and lemma_ok == 200, detail};
}

Outcome side_condition_necessity()
{
    auto inst = testkit::p17_counterexample();
    bool other = inst.cat.meta("Log").class_of("res") == AttrClass::Other;
    bool differs = not verify_rule_on_instance(RuleId::P17, Direction::LeftToRight, inst.expr, inst.path, inst.cat);
    bool blocked = false;
    try {
        apply_rule(RuleId::P17, Direction::LeftToRight, inst.expr, inst.path, inst.cat);
    } catch (const SideConditionUnverified &) {
        blocked = true;
    }
    return {other and differs and blocked, "unclassified attribute: sides differ, rewrite blocked"};
}

Outcome cost_orders()
{
    CostParams p = worked_params();
    Rational first = table5_order(Sequence::SelectFirst, true, p);
    Rational last = table5_order(Sequence::SelectLast, false, p);
    p.M = p.N / p.F;
    Rational order = order_of_cost(p);
    return {first == 20 and last == 80000 and order == 80000,
            "select-first " + to_string(first) + ", select-last " + to_string(last) + ", order " + to_string(order)};
}

Catalog worked_catalog(AttrClass cls)
{
    Catalog cat;
    RelationMeta meta;
    meta.case_attr = "case";
    meta.time_attr = "time";
    meta.attr_classes["a"] = cls;
    meta.stats.events = 10000;
    meta.stats.cases = 500;
    cat.add("Log", Relation(Schema({{"case", Domain::Integer}, {"time", Domain::Integer}, {"a", Domain::Integer}})),
            meta);
    return cat;
}

Outcome computed_cost()
{
    Catalog cat = worked_catalog(AttrClass::Case);
    CostParams p = worked_params();
    p.M = 200;
    Rational first = estimate_plan(parse("df(case, time, select(a = 1, Log))"), cat, p).total.total();
    Rational last =
        estimate_plan(parse("select(d.a = 1 & u.a = 1, df(case, time, Log))"), cat, p, DfStrategy::Composite)
            .total.total();
    double rel = std::abs(to_double(last) - 95000) / 95000;
    return {first == 21 and rel <= 0.25,
            "select-first " + to_string(first) + ", select-last " + to_string(last) + " at M=200 (" +
                std::to_string(int(std::lround(rel * 100))) + "% from 95000)"};
}

Outcome two_jumps()
{
    CostParams p;
    p.V = 1'000'000;
    p.N = p.V;
    p.F = 50;
    p.M = 1'000'000;
    p.tuple_bytes = 80;
    auto pts = sweep(p, SweepAxis::EventsPerCase, 2, 20, 1);
    auto jumps = detect_jumps(pts);
    auto [x1, x2] = fit_thresholds_events_per_case(p);
    bool ok = jumps.size() == 2 and std::abs(to_double(pts[jumps[0]].x) - x1) <= 1 and
              std::abs(to_double(pts[jumps[1]].x) - x2) <= 1;
    std::string at;
    for (auto j : jumps) at += " " + to_string(pts[j].x);
    return {ok, "jumps at" + at + ", thresholds " + std::to_string(x1) + " and " + std::to_string(x2)};
}

Outcome strategy_table()
{
    CostParams p = worked_params();
    p.M = 200;
    bool ok = true;
    for (int b : {1, 10, 200, 777, 5000}) {
        auto rows = strategy_costs(b, p);
        CostParams q = p;
        q.N = Rational(b) * p.F;
        ok = ok and rows.size() == 4 and rows[0].blocks == 3 * b and rows[1].blocks == b and rows[2].blocks == b and
             rows[3].blocks == composite_df_cost(q).total();
    }
    std::ostringstream out, err;
    const char *argv[] = {"dfq", "cost", "--strategies", "--B", "200", "--V", "500", "--M", "200"};
    int code = cli::run_cli(9, argv, out, err);
    ok = ok and code == 0 and out.str().find("600") != std::string::npos and
         out.str().find("76200") != std::string::npos;
    return {ok, "3B, B, B and the composite cost for five block counts"};
}

Outcome optimizer_effect()
{
    auto dir = std::filesystem::temp_directory_path() / "dfq_acceptance_log";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "log.csv") << "case,time,a\n1,1,1\n1,2,1\n2,1,2\n";
    std::ofstream(dir / "log.meta") << "name=Log\ncase_attr=case\ntime_attr=time\nclass.a=case\nstats.N=10000\n"
                                       "stats.V=500\n";
    std::string meta = (dir / "log.meta").string();
    auto explain = [&] {
        const char *argv[] = {"dfq",   "explain", "-c",   meta.c_str(), "--engine", "composite", "--M", "200",
                              "--F",   "50",      "--Q",  "0.1",        "select(d.a = 1 & u.a = 1, df(case, time, Log))"};
        std::ostringstream out, err;
        int code = cli::run_cli(13, argv, out, err);
        return std::make_pair(code, out.str());
    };
    auto [code, text] = explain();
    bool ok = code == 0 and text.find("df case, time\n    select a = 1") != std::string::npos and
              text.find("est_original: 76200 blocks, est_chosen: 21 blocks") != std::string::npos;
    for (int i = 0; i < 3; ++i) ok = ok and explain().second == text;
    std::filesystem::remove_all(dir);
    return {ok, "selection pushed below directly-follows, 76200 -> 21 blocks, stable across runs"};
}

Outcome round_trip()
{
    std::mt19937_64 rng(2024);
    int ok = 0;
    for (int i = 0; i < 1000; ++i) {
        Expr e = testkit::random_expr(rng);
        ok += parse(render(e)) == e;
    }
    const char *queries[] = {
        "project(d.d.activity, d.u.activity, select(u.u.activity = 'reject', df(u.case, u.end_time, df(case, "
        "end_time, Log))))",
        "select(u.amount != d.amount, df(u.case, u.end_time, Log))",
        "project(u.resource, select(u.amount != d.amount, df(u.case, u.end_time, Log)))"};
    int examples = 0;
    for (auto q : queries) {
        Expr e = parse(q);
        examples += parse(render(e)) == e;
    }
    return {ok == 1000 and examples == 3,
            std::to_string(ok) + "/1000 random trees, " + std::to_string(examples) + "/3 example queries"};
}

Outcome tuple_counts()
{
    auto g = testkit::uniform_log(500, 20);
    Catalog cat;
    cat.add("Log", g.relation, g.meta);
    EvalMetrics m;
    evaluate(parse("df(case, time, Log)"), cat, {DfStrategy::Composite, true}, &m);
    auto first = m.node_cardinalities.at("/0"), middle = m.node_cardinalities.at("/1");
    bool ok = first == 95000 and middle == 85500 and Rational(first) == following_pairs(10000, 500) and
              Rational(middle) == indirect_pairs(10000, 500);
    return {ok, "first join " + std::to_string(first) + ", projected middle join " + std::to_string(middle)};
}

} // namespace

int main()
{
    const std::pair<const char *, std::function<Outcome()>> criteria[] = {
        {"sample log pairs", sample_pairs},
        {"oracle equivalence", oracle_equivalence},
        {"rule soundness", rule_soundness},
        {"side condition necessity", side_condition_necessity},
        {"cost orders", cost_orders},
        {"computed cost", computed_cost},
        {"two cost jumps", two_jumps},
        {"strategy comparison", strategy_table},
        {"optimizer effect", optimizer_effect},
        {"parser round trip", round_trip},
        {"tuple count formulas", tuple_counts},
    };
    int failed = 0, n = 0;
    for (auto &[name, check] : criteria) {
        ++n;
        Outcome o;
        try {
            o = check();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += not o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << n << " " << name << ": " << o.detail << "\n";
    }
    return failed ? 1 : 0;
}
