#include "testkit.hpp"

#include "dfq/parser.hpp"

#include <algorithm>

namespace dfq::testkit {

namespace {

using Names = std::vector<std::string>;

const Names kR = {"r0", "r1", "r2"};
const Names kS = {"s0", "s1", "s2"};
const Names kT = {"t0", "t1"};

std::size_t below(std::mt19937_64 &rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

Names join_names(Names a, const Names &b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

/// A non-empty random subset of `names`, shuffled.
Names some_of(std::mt19937_64 &rng, Names names)
{
    std::shuffle(names.begin(), names.end(), rng);
    names.resize(1 + below(rng, names.size()));
    return names;
}

Names shuffled(std::mt19937_64 &rng, Names names)
{
    std::shuffle(names.begin(), names.end(), rng);
    return names;
}

/// A condition over both sides: one cross comparison combined with a random condition.
Condition cross_condition(std::mt19937_64 &rng, const Names &left, const Names &right, bool bare = false)
{
    Condition link = attr_cmp_attr(left[below(rng, left.size())], static_cast<CompareOp>(below(rng, 6)),
                                   right[below(rng, right.size())]);
    if (bare or below(rng, 2)) return link;
    return Condition::conj(link, random_condition(rng, join_names(left, right), 1));
}

struct Builder
{
    std::mt19937_64 rng;
    Catalog cat;

    Expr rel(const std::string &name, const Names &attrs, RelationMeta meta = {})
    {
        cat.add(name, random_relation(rng, attrs, 6), std::move(meta));
        return Expr::base(name);
    }

    Condition cond(const Names &names) { return random_condition(rng, names, 2); }

    /// A condition usable on an event attribute: no negation, every comparison mentions `a`.
    Condition cond_on(const std::string &a, int depth = 2)
    {
        std::size_t shape = depth <= 0 ? 0 : below(rng, 3);
        if (shape == 0)
            return attr_cmp(a, static_cast<CompareOp>(below(rng, 6)), Value::integer(std::int64_t(below(rng, 4))));
        if (shape == 1) return Condition::conj(cond_on(a, depth - 1), cond_on(a, depth - 1));
        return Condition::disj(cond_on(a, depth - 1), cond_on(a, depth - 1));
    }

    /// A log with attributes `a` (and `b`) of the given classes plus a resource attribute.
    Expr log(AttrClass ca, AttrClass cb, double absent_rate = 0.3)
    {
        LogSpec spec;
        spec.cases = 2 + below(rng, 6);
        spec.min_events = 1;
        spec.max_events = 6;
        spec.duplicate_timestamp_rate = 0.15;
        spec.seed = rng();
        spec.attrs = {{"a", ca, int_pool(0, 2), absent_rate}, {"b", cb, int_pool(0, 2), absent_rate},
                      {"res", AttrClass::Other, int_pool(0, 2), 0.1}};
        auto g = generate_log(spec);
        cat.add("Log", g.relation, g.meta);
        return Expr::base("Log");
    }

    /// R and S where every R tuple has an S partner under `r0 = s0`; the totality fact is declared on S.
    Expr total_join()
    {
        Relation r = random_relation(rng, kR, 6);
        std::vector<Value> kept, cells;
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (r.row(i)[0].is_absent()) continue;
            kept.insert(kept.end(), r.row(i).begin(), r.row(i).end());
            cells.push_back(r.row(i)[0]);
            cells.push_back(Value::integer(std::int64_t(below(rng, 4))));
        }
        Relation extra = random_relation(rng, {"s0", "s1"}, 3);
        cells.insert(cells.end(), extra.cells().begin(), extra.cells().end());
        cat.add("R", Relation::from_cells(r.schema(), kept));
        Expr join = Expr::join(attr_cmp_attr("r0", CompareOp::Eq, "s0"), Expr::base("R"), Expr::base("S"));
        RelationMeta meta;
        meta.totality_facts.insert(render(join));
        cat.add("S", Relation::from_cells(Schema({{"s0", Domain::Integer}, {"s1", Domain::Integer}}), cells), meta);
        return join;
    }
};

Expr lr_instance(Builder &b, RuleId rule)
{
    auto cond = [&](const Names &n) { return b.cond(n); };
    auto &rng = b.rng;
    switch (rule) {
        case RuleId::E1: {
            Expr r = b.rel("R", kR);
            return Expr::select(Condition::conj(cond(kR), cond(kR)), r);
        }
        case RuleId::E2: {
            Expr r = b.rel("R", kR);
            return Expr::select(cond(kR), Expr::select(cond(kR), r));
        }
        case RuleId::E3: {
            Expr r = b.rel("R", kR), s = b.rel("S", kS);
            return Expr::join(cross_condition(rng, kR, kS), r, s);
        }
        case RuleId::E4: {
            Expr r = b.rel("R", kR), s = b.rel("S", kS), t = b.rel("T", kT);
            return Expr::join(cross_condition(rng, kS, kT, true), Expr::join(cross_condition(rng, kR, kS, true), r, s),
                              t);
        }
        case RuleId::E5: {
            Expr r = b.rel("R", kR), s = b.rel("S", kS);
            Condition psi = below(rng, 2) ? cond(kR) : cond(kS);
            return Expr::select(psi, Expr::join(cross_condition(rng, kR, kS), r, s));
        }
        case RuleId::E6: {
            Expr r = b.rel("R", kR), s = b.rel("S", kR);
            return Expr::select(cond(kR), Expr::minus(r, s));
        }
        case RuleId::E7: {
            Expr r = b.rel("R", kR);
            Names after = {"x", "r1", "r2"};
            return Expr::select(cond(after), Expr::rename("r0", "x", r));
        }
        case RuleId::E8: {
            Expr r = b.rel("R", kR);
            Names keep = some_of(rng, {"r1", "r2"});
            keep.push_back("x");
            return Expr::project(shuffled(rng, keep), Expr::rename("r0", "x", r));
        }
        case RuleId::E9: {
            Expr r = b.rel("R", kR);
            Names keep = some_of(rng, kR);
            return Expr::project(keep, Expr::select(cond(keep), r));
        }
        case RuleId::E10: {
            Expr r = b.rel("R", kR), s = b.rel("S", kS);
            Condition phi = cross_condition(rng, kR, kS);
            auto used = attrs(phi);
            Names keep(used.begin(), used.end());
            for (auto &a : join_names(kR, kS))
                if (not used.contains(a) and below(rng, 2)) keep.push_back(a);
            return Expr::project(shuffled(rng, keep), Expr::join(phi, r, s));
        }
        case RuleId::E11: {
            Expr r = b.rel("R", kR);
            Names outer = some_of(rng, kR);
            Names inner = outer;
            for (auto &a : kR)
                if (std::find(inner.begin(), inner.end(), a) == inner.end() and below(rng, 2)) inner.push_back(a);
            return Expr::project(outer, Expr::project(shuffled(rng, inner), r));
        }
        case RuleId::E12: {
            Expr r = b.rel("R", kR);
            Names keep = some_of(rng, kR);
            return Expr::project(shuffled(rng, keep), Expr::project(shuffled(rng, keep), r));
        }
        case RuleId::E13: {
            Expr r = b.rel("R", kR), s = b.rel("S", kS);
            std::string from = below(rng, 2) ? "r1" : "s2";
            return Expr::rename(from, "x", Expr::join(cross_condition(rng, kR, kS), r, s));
        }
        case RuleId::E14: {
            Expr r = b.rel("R", kR);
            return Expr::project(shuffled(rng, kR), r);
        }
        case RuleId::E15: {
            Expr join = b.total_join();
            Names keep = below(rng, 2) ? kR : shuffled(rng, kR);
            return Expr::project(keep, join);
        }
        case RuleId::E16: {
            Expr r = b.rel("R", kR), t = b.rel("T", kR), s = b.rel("S", kS);
            return Expr::join(cross_condition(rng, kR, kS), Expr::minus(r, t), s);
        }
        case RuleId::P17: {
            AttrClass cls = below(rng, 2) ? AttrClass::Case : AttrClass::Event;
            Expr log = b.log(cls, AttrClass::Other);
            Condition phi = cls == AttrClass::Case ? b.cond({"a"}) : b.cond_on("a");
            return Expr::df("case", "time", Expr::select(phi, log));
        }
        case RuleId::P18: {
            auto cls = [&] { return below(rng, 8) ? AttrClass::Case : AttrClass::Event; };
            AttrClass ca = cls(), cb = cls();
            Expr log = b.log(ca, cb, 0.1);
            bool flip = below(rng, 2);
            return Expr::df("case", "time",
                            Expr::select(attr_cmp_attr(flip ? "b" : "a", static_cast<CompareOp>(below(rng, 6)),
                                                       flip ? "a" : "b"),
                                         log));
        }
        case RuleId::P20: {
            Condition phi = attr_cmp_attr("case", CompareOp::Eq, "s0");
            Relation r;
            {
                LogSpec spec;
                spec.cases = 1 + below(rng, 4);
                spec.min_events = 1;
                spec.max_events = 5;
                spec.duplicate_timestamp_rate = 0.15;
                spec.seed = rng();
                spec.event_ids = false;
                spec.attrs = {{"r2", AttrClass::Other, int_pool(0, 3), 0.1}};
                auto g = generate_log(spec);
                b.cat.add("R", g.relation, g.meta);
                r = g.relation;
            }
            std::vector<Value> cells;
            for (std::int64_t c = 0; c <= std::int64_t(r.size()) + 1; ++c) {
                std::size_t copies = 1 + below(rng, 2);
                for (std::size_t k = 0; k < copies; ++k) {
                    cells.push_back(Value::integer(c));
                    cells.push_back(Value::integer(std::int64_t(below(rng, 4))));
                }
            }
            b.cat.add("S", Relation::from_cells(Schema({{"s0", Domain::Integer}, {"s1", Domain::Integer}}), cells));
            if (below(rng, 2)) phi = Condition::conj(phi, attr_cmp("s1", CompareOp::Ge, Value::integer(0)));
            Expr join = Expr::join(phi, Expr::base("R"), Expr::base("S"));
            RelationMeta meta = b.cat.meta("S");
            meta.totality_facts.insert(render(join));
            b.cat.add("S", b.cat.relation("S"), meta);
            return Expr::df("case", "time", join);
        }
        case RuleId::DFP: {
            Expr log = b.log(AttrClass::Other, AttrClass::Other);
            Names keep = {"case", "time"};
            for (auto &a : Names{"a", "b", "res", "id"})
                if (below(rng, 2)) keep.push_back(a);
            return Expr::df("case", "time", Expr::project(shuffled(rng, keep), log));
        }
    }
    throw InvalidArgument("no instance generator for rule");
}

} // namespace

RuleInstance make_rule_instance(RuleId rule, Direction dir, std::uint64_t seed)
{
    Builder b{std::mt19937_64(seed * 7919 + static_cast<std::uint64_t>(rule)), {}};
    Expr e = lr_instance(b, rule);
    NodePath path;
    if (b.rng() % 3 == 0) {
        e = Expr::union_of(e, e);
        path = {0};
    }
    if (dir == Direction::RightToLeft) e = apply_rule(rule, Direction::LeftToRight, e, path, b.cat);
    return {std::move(b.cat), e, path};
}

RuleInstance p17_counterexample()
{
    Schema schema({{"case", Domain::Integer}, {"time", Domain::Integer}, {"res", Domain::Text}});
    auto row = [](std::int64_t t, const char *res) {
        return std::vector<Value>{Value::integer(1), Value::integer(t), Value::text(res)};
    };
    Relation log = Relation::from_rows(schema, {row(1, "Pete"), row(2, "Mike"), row(3, "Pete")});
    RelationMeta meta;
    meta.case_attr = "case";
    meta.time_attr = "time";
    meta.attr_classes["res"] = AttrClass::Other;
    collect_stats(log, meta);
    Catalog cat;
    cat.add("Log", log, meta);
    Expr e = Expr::df("case", "time", Expr::select(attr_cmp("res", CompareOp::Eq, Value::text("Pete")),
                                                   Expr::base("Log")));
    return {std::move(cat), e, {}};
}

} // namespace dfq::testkit
