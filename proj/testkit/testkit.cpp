#include "testkit.hpp"

#include "dfq/value.hpp"

#include <algorithm>
#include <numeric>

namespace dfq::testkit {

namespace {

bool chance(std::mt19937_64 &rng, double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

template <class T>
const T &pick(std::mt19937_64 &rng, const std::vector<T> &v)
{
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

std::size_t below(std::mt19937_64 &rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

} // namespace

std::vector<Value> int_pool(std::int64_t lo, std::int64_t hi)
{
    std::vector<Value> out;
    for (std::int64_t i = lo; i <= hi; ++i) out.push_back(Value::integer(i));
    return out;
}

GeneratedLog generate_log(const LogSpec &spec)
{
    std::mt19937_64 rng(spec.seed);
    std::vector<Attribute> attrs{{spec.case_attr, Domain::Integer}, {spec.time_attr, Domain::Integer}};
    if (spec.event_ids) attrs.push_back({"id", Domain::Integer});
    for (auto &a : spec.attrs) attrs.push_back({a.name, a.pool.empty() ? Domain::Integer : *a.pool.front().domain()});
    Schema schema(attrs);

    std::vector<Value> cells;
    std::int64_t next_id = 0;
    for (std::size_t c = 0; c < spec.cases; ++c) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(spec.min_events, spec.max_events)(rng);
        std::vector<std::int64_t> times;
        std::int64_t t = std::uniform_int_distribution<std::int64_t>(0, 5)(rng);
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 0 and not chance(rng, spec.duplicate_timestamp_rate))
                t += std::uniform_int_distribution<std::int64_t>(1, 3)(rng);
            times.push_back(t);
        }
        std::vector<std::vector<Value>> columns;
        for (auto &a : spec.attrs) {
            std::vector<Value> col(n);
            if (a.pool.empty() or n == 0) {
                columns.push_back(col);
                continue;
            }
            switch (a.cls) {
                case AttrClass::Case:
                    if (not chance(rng, a.absent_rate)) {
                        std::size_t from = below(rng, n);
                        while (from > 0 and times[from - 1] == times[from]) --from;
                        Value v = pick(rng, a.pool);
                        for (std::size_t i = from; i < n; ++i) col[i] = v;
                    }
                    break;
                case AttrClass::Event:
                    if (not chance(rng, a.absent_rate)) col[below(rng, n)] = pick(rng, a.pool);
                    break;
                case AttrClass::Other:
                    for (auto &v : col)
                        if (not chance(rng, a.absent_rate)) v = pick(rng, a.pool);
                    break;
            }
            columns.push_back(col);
        }
        for (std::size_t i = 0; i < n; ++i) {
            cells.push_back(Value::integer(static_cast<std::int64_t>(c + 1)));
            cells.push_back(Value::integer(times[i]));
            if (spec.event_ids) cells.push_back(Value::integer(next_id++));
            for (auto &col : columns) cells.push_back(col[i]);
        }
    }
    GeneratedLog out{Relation::from_cells(schema, std::move(cells)), {}};
    out.meta.case_attr = spec.case_attr;
    out.meta.time_attr = spec.time_attr;
    for (auto &a : spec.attrs) out.meta.attr_classes[a.name] = a.cls;
    collect_stats(out.relation, out.meta);
    return out;
}

GeneratedLog uniform_log(std::size_t cases, std::size_t per_case, std::uint64_t seed)
{
    LogSpec spec;
    spec.cases = cases;
    spec.min_events = spec.max_events = per_case;
    spec.seed = seed;
    spec.attrs.push_back({"activity", AttrClass::Other, int_pool(0, 9), 0.0});
    return generate_log(spec);
}

Relation brute_force_df(const Relation &log, const std::string &c, const std::string &t)
{
    const std::size_t ci = log.schema().index_of(c), ti = log.schema().index_of(t);
    const Schema out_schema = log.schema().prefixed(kDownPrefix).concat(log.schema().prefixed(kUpPrefix));
    std::vector<Value> cells;
    for (std::size_t i = 0; i < log.size(); ++i) {
        Row e = log.row(i);
        for (std::size_t j = 0; j < log.size(); ++j) {
            Row f = log.row(j);
            if (not compare(e[ci], CompareOp::Eq, f[ci]) or not compare(e[ti], CompareOp::Lt, f[ti])) continue;
            bool between = false;
            for (std::size_t k = 0; k < log.size() and not between; ++k) {
                Row g = log.row(k);
                between = compare(g[ci], CompareOp::Eq, e[ci]) and compare(e[ti], CompareOp::Lt, g[ti]) and
                          compare(g[ti], CompareOp::Lt, f[ti]);
            }
            if (between) continue;
            cells.insert(cells.end(), e.begin(), e.end());
            cells.insert(cells.end(), f.begin(), f.end());
        }
    }
    return Relation::from_cells(out_schema, std::move(cells));
}

namespace {

struct SampleRow
{
    int case_id;
    const char *activity, *start, *end;
};

constexpr SampleRow kSampleLog[] = {
    {1, "A", "00:20", "00:22"}, {1, "B", "02:04", "02:08"}, {1, "E", "02:32", "02:32"},
    {2, "A", "02:15", "02:20"}, {2, "D", "03:14", "03:19"}, {2, "E", "05:06", "05:07"},
    {3, "A", "02:27", "02:29"}, {3, "D", "04:17", "04:20"}, {3, "E", "06:51", "06:53"},
    {4, "A", "03:06", "03:10"}, {4, "B", "05:04", "05:09"}, {4, "E", "07:26", "07:29"},
    {5, "A", "03:40", "03:44"}, {5, "B", "05:59", "06:06"}, {5, "E", "07:49", "07:52"},
    {6, "A", "04:18", "04:20"}, {6, "C", "07:08", "07:12"}, {6, "E", "09:05", "09:07"},
};

std::vector<Value> sample_row(const SampleRow &r)
{
    return {Value::integer(r.case_id), Value::text(r.activity), Value::timestamp(*parse_timestamp(r.start)),
            Value::timestamp(*parse_timestamp(r.end))};
}

Schema sample_schema()
{
    return Schema({{"case", Domain::Integer},
                   {"activity", Domain::Text},
                   {"start_time", Domain::Timestamp},
                   {"end_time", Domain::Timestamp}});
}

} // namespace

Relation sample_log()
{
    std::vector<std::vector<Value>> rows;
    for (auto &r : kSampleLog) rows.push_back(sample_row(r));
    return Relation::from_rows(sample_schema(), rows);
}

Relation sample_log_pairs()
{
    std::vector<std::vector<Value>> rows;
    for (std::size_t i = 0; i + 1 < std::size(kSampleLog); ++i) {
        if (kSampleLog[i].case_id != kSampleLog[i + 1].case_id) continue;
        auto row = sample_row(kSampleLog[i]);
        auto next = sample_row(kSampleLog[i + 1]);
        row.insert(row.end(), next.begin(), next.end());
        rows.push_back(row);
    }
    Schema s = sample_schema();
    return Relation::from_rows(s.prefixed(kDownPrefix).concat(s.prefixed(kUpPrefix)), rows);
}

Catalog sample_catalog()
{
    RelationMeta meta;
    meta.case_attr = "case";
    meta.time_attr = "end_time";
    Relation r = sample_log();
    collect_stats(r, meta);
    Catalog cat;
    cat.add("Log", r, meta);
    return cat;
}

Relation random_relation(std::mt19937_64 &rng, const std::vector<std::string> &names, std::size_t max_rows,
                         std::int64_t max_value, double absent_rate)
{
    std::vector<Attribute> attrs;
    for (auto &n : names) attrs.push_back({n, Domain::Integer});
    std::size_t rows = std::uniform_int_distribution<std::size_t>(0, max_rows)(rng);
    std::vector<Value> cells;
    for (std::size_t i = 0; i < rows * names.size(); ++i)
        cells.push_back(chance(rng, absent_rate) ? Value()
                                                 : Value::integer(std::uniform_int_distribution<std::int64_t>(
                                                       0, max_value)(rng)));
    return Relation::from_cells(Schema(attrs), std::move(cells));
}

namespace {

CompareOp random_op(std::mt19937_64 &rng) { return static_cast<CompareOp>(below(rng, 6)); }

} // namespace

Condition random_condition(std::mt19937_64 &rng, const std::vector<std::string> &names, int depth)
{
    std::size_t shape = depth <= 0 ? below(rng, 2) : below(rng, 5);
    switch (shape) {
        case 0: return attr_cmp(pick(rng, names), random_op(rng), Value::integer(std::int64_t(below(rng, 4))));
        case 1:
            if (names.size() > 1) {
                std::string a = pick(rng, names), b = pick(rng, names);
                if (a != b) return attr_cmp_attr(a, random_op(rng), b);
            }
            return attr_cmp(pick(rng, names), random_op(rng), Value::integer(std::int64_t(below(rng, 4))));
        case 2:
            return Condition::conj(random_condition(rng, names, depth - 1), random_condition(rng, names, depth - 1));
        case 3:
            return Condition::disj(random_condition(rng, names, depth - 1), random_condition(rng, names, depth - 1));
        default: return Condition::negate(random_condition(rng, names, depth - 1));
    }
}

namespace {

Value random_literal(std::mt19937_64 &rng)
{
    switch (below(rng, 5)) {
        case 0: return Value::integer(std::uniform_int_distribution<std::int64_t>(-1000, 1000)(rng));
        case 1: return Value::decimal(double(std::uniform_int_distribution<int>(-4000, 4000)(rng)) / 8);
        case 2: return Value::timestamp(std::uniform_int_distribution<std::int64_t>(0, 86'399'999)(rng));
        case 3:
            return Value::timestamp(std::uniform_int_distribution<std::int64_t>(1, 20'000)(rng) * 86'400'000 +
                                    std::uniform_int_distribution<std::int64_t>(0, 86'399)(rng) * 1000);
        default: {
            static const std::vector<std::string> texts = {"A", "hello world", "it's", "back\\slash", "", "x\"y"};
            return Value::text(pick(rng, texts));
        }
    }
}

const std::vector<std::string> kNames = {"a", "b", "case", "end_time", "d.a", "u.b", "d.d.x"};
const std::vector<std::string> kRelations = {"Log", "R", "S", "events_2"};

Condition random_syntax_condition(std::mt19937_64 &rng, int depth)
{
    std::size_t shape = depth <= 0 ? below(rng, 3) : below(rng, 6);
    auto attr = [&] { return pick(rng, kNames); };
    switch (shape) {
        case 0: return attr_cmp(attr(), random_op(rng), random_literal(rng));
        case 1: return attr_cmp_attr(attr(), random_op(rng), attr());
        case 2: return Condition::compare(random_literal(rng), random_op(rng), AttrRef{attr()});
        case 3: return Condition::conj(random_syntax_condition(rng, depth - 1), random_syntax_condition(rng, depth - 1));
        case 4: return Condition::disj(random_syntax_condition(rng, depth - 1), random_syntax_condition(rng, depth - 1));
        default: return Condition::negate(random_syntax_condition(rng, depth - 1));
    }
}

} // namespace

Expr random_expr(std::mt19937_64 &rng, int depth)
{
    if (depth <= 0 or below(rng, 6) == 0) return Expr::base(pick(rng, kRelations));
    auto sub = [&] { return random_expr(rng, depth - 1); };
    switch (below(rng, 11)) {
        case 0: return Expr::select(random_syntax_condition(rng, 2), sub());
        case 1: {
            std::vector<std::string> as;
            for (std::size_t i = 0, n = 1 + below(rng, 3); i < n; ++i) as.push_back(pick(rng, kNames));
            return Expr::project(as, sub());
        }
        case 2: return Expr::rename(pick(rng, kNames), pick(rng, kNames), sub());
        case 3: return Expr::prefix(below(rng, 2) ? "d" : "u", sub());
        case 4: return Expr::product(sub(), sub());
        case 5: return Expr::join(random_syntax_condition(rng, 1), sub(), sub());
        case 6: return Expr::union_of(sub(), sub());
        case 7: return Expr::intersect(sub(), sub());
        case 8: return Expr::minus(sub(), sub());
        default: return Expr::df(pick(rng, kNames), pick(rng, kNames), sub());
    }
}

LemmaInstance make_lemma_instance(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::size_t n = below(rng, 8);
    std::vector<std::int64_t> keys(12);
    std::iota(keys.begin(), keys.end(), 0);
    std::shuffle(keys.begin(), keys.end(), rng);
    Schema schema({{"k", Domain::Integer}, {"x", Domain::Integer}, {"y", Domain::Integer}});
    std::vector<std::vector<Value>> rows, sub;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Value> row{Value::integer(keys[i]), Value::integer(std::int64_t(below(rng, 3))),
                               chance(rng, 0.2) ? Value() : Value::integer(std::int64_t(below(rng, 3)))};
        if (chance(rng, 0.5)) sub.push_back(row);
        rows.push_back(std::move(row));
    }
    std::vector<std::string> key{"k"};
    if (chance(rng, 0.5)) key.push_back("x");
    return {Relation::from_rows(schema, rows), Relation::from_rows(schema, sub), key};
}

} // namespace dfq::testkit
