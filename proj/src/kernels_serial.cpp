#include "dfq/kernels.hpp"

#include "df_scan.hpp"

namespace dfq::kernels::serial {

Relation select(const Relation &r, const Condition &cond, Counters &counters)
{
    BoundCondition pred(cond, r.schema());
    std::vector<Value> out;
    for (std::size_t i = 0; i < r.size(); ++i) {
        Row row = r.row(i);
        if (pred(row)) out.insert(out.end(), row.begin(), row.end());
    }
    counters.comparisons += r.size();
    return Relation::from_sorted_cells(r.schema(), std::move(out));
}

Relation product(const Relation &l, const Relation &r)
{
    std::vector<Value> out;
    out.reserve(l.size() * r.size() * (l.arity() + r.arity()));
    for (std::size_t i = 0; i < l.size(); ++i)
        for (std::size_t j = 0; j < r.size(); ++j) {
            Row a = l.row(i), b = r.row(j);
            out.insert(out.end(), a.begin(), a.end());
            out.insert(out.end(), b.begin(), b.end());
        }
    return Relation::from_sorted_cells(l.schema().concat(r.schema()), std::move(out));
}

Relation join(const Condition &cond, const Relation &l, const Relation &r, Counters &counters)
{
    Schema s = l.schema().concat(r.schema());
    BoundCondition pred(cond, s);
    std::vector<Value> out;
    for (std::size_t i = 0; i < l.size(); ++i)
        for (std::size_t j = 0; j < r.size(); ++j) {
            Row a = l.row(i), b = r.row(j);
            if (not pred(a, b)) continue;
            out.insert(out.end(), a.begin(), a.end());
            out.insert(out.end(), b.begin(), b.end());
        }
    counters.comparisons += l.size() * r.size();
    return Relation::from_sorted_cells(std::move(s), std::move(out));
}

Relation df_native(const Relation &log, const std::string &c, const std::string &t)
{
    std::size_t ci = log.schema().index_of(c), ti = log.schema().index_of(t);
    auto runs = detail::sort_by_case(log, ci, ti);
    std::vector<Value> out;
    for (std::size_t k = 0; k < runs.starts.size(); ++k) {
        std::size_t end = k + 1 < runs.starts.size() ? runs.starts[k + 1] : runs.order.size();
        detail::emit_case(log, runs.order, runs.starts[k], end, ti, out);
    }
    return Relation::from_cells(df_schema(log.schema()), std::move(out));
}

} // namespace dfq::kernels::serial
