#include "dfq/kernels.hpp"

#include "df_scan.hpp"

#include <exception>
#include <unordered_map>

#include <omp.h>

namespace dfq::kernels::parallel {

namespace {

/** Runs `body(begin, end, out, work)` over chunks of `[0, n)` and concatenates the outputs in chunk order, so ordered
 * input yields ordered output. */
template<typename Body>
std::vector<Value> chunked(std::size_t n, std::uint64_t &work, Body body)
{
    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(n, 8 * omp_get_max_threads()));
    std::vector<std::vector<Value>> parts(chunks);
    std::vector<std::uint64_t> counts(chunks, 0);
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t c = 0; c < chunks; ++c) {
        try {
            body(n * c / chunks, n * (c + 1) / chunks, parts[c], counts[c]);
        } catch (...) {
#pragma omp critical
            if (not err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    std::size_t total = 0;
    for (auto &p : parts) total += p.size();
    std::vector<Value> out;
    out.reserve(total);
    for (std::size_t c = 0; c < chunks; ++c) {
        out.insert(out.end(), parts[c].begin(), parts[c].end());
        work += counts[c];
    }
    return out;
}

struct KeyHash
{
    std::size_t operator()(const std::vector<Value> &k) const
    {
        std::size_t h = 0x9e3779b97f4a7c15ull;
        for (auto &v : k) h ^= v.hash() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return h;
    }
};

} // namespace

Relation select(const Relation &r, const Condition &cond, Counters &counters)
{
    BoundCondition pred(cond, r.schema());
    auto cells = chunked(r.size(), counters.comparisons,
                         [&](std::size_t lo, std::size_t hi, std::vector<Value> &out, std::uint64_t &work) {
                             for (std::size_t i = lo; i < hi; ++i) {
                                 Row row = r.row(i);
                                 if (pred(row)) out.insert(out.end(), row.begin(), row.end());
                             }
                             work += hi - lo;
                         });
    return Relation::from_sorted_cells(r.schema(), std::move(cells));
}

Relation product(const Relation &l, const Relation &r)
{
    std::uint64_t unused = 0;
    auto cells = chunked(l.size(), unused, [&](std::size_t lo, std::size_t hi, std::vector<Value> &out, auto &) {
        for (std::size_t i = lo; i < hi; ++i)
            for (std::size_t j = 0; j < r.size(); ++j) {
                Row a = l.row(i), b = r.row(j);
                out.insert(out.end(), a.begin(), a.end());
                out.insert(out.end(), b.begin(), b.end());
            }
    });
    return Relation::from_sorted_cells(l.schema().concat(r.schema()), std::move(cells));
}

Relation join(const Condition &cond, const Relation &l, const Relation &r, Counters &counters)
{
    Schema s = l.schema().concat(r.schema());
    BoundCondition pred(cond, s);
    auto keys = equi_keys(cond, l.schema(), r.schema());
    auto emit = [](std::vector<Value> &out, Row a, Row b) {
        out.insert(out.end(), a.begin(), a.end());
        out.insert(out.end(), b.begin(), b.end());
    };

    if (keys.empty()) {
        auto cells =
            chunked(l.size(), counters.comparisons,
                    [&](std::size_t lo, std::size_t hi, std::vector<Value> &out, std::uint64_t &work) {
                        for (std::size_t i = lo; i < hi; ++i)
                            for (std::size_t j = 0; j < r.size(); ++j)
                                if (pred(l.row(i), r.row(j))) emit(out, l.row(i), r.row(j));
                        work += (hi - lo) * r.size();
                    });
        return Relation::from_sorted_cells(std::move(s), std::move(cells));
    }

    // Absent never satisfies equality, so rows with an absent key take no part.
    std::unordered_map<std::vector<Value>, std::vector<std::size_t>, KeyHash> table;
    std::vector<Value> key(keys.size());
    for (std::size_t j = 0; j < r.size(); ++j) {
        Row b = r.row(j);
        bool absent = false;
        for (std::size_t k = 0; k < keys.size(); ++k) {
            key[k] = b[keys[k].second];
            absent = absent or key[k].is_absent();
        }
        if (not absent) table[key].push_back(j);
    }
    auto cells = chunked(l.size(), counters.comparisons,
                         [&](std::size_t lo, std::size_t hi, std::vector<Value> &out, std::uint64_t &work) {
                             std::vector<Value> probe(keys.size());
                             for (std::size_t i = lo; i < hi; ++i) {
                                 Row a = l.row(i);
                                 bool absent = false;
                                 for (std::size_t k = 0; k < keys.size(); ++k) {
                                     probe[k] = a[keys[k].first];
                                     absent = absent or probe[k].is_absent();
                                 }
                                 if (absent) continue;
                                 auto it = table.find(probe);
                                 if (it == table.end()) continue;
                                 for (auto j : it->second)
                                     if (pred(a, r.row(j))) emit(out, a, r.row(j));
                                 work += it->second.size();
                             }
                         });
    return Relation::from_sorted_cells(std::move(s), std::move(cells));
}

Relation df_native(const Relation &log, const std::string &c, const std::string &t)
{
    std::size_t ci = log.schema().index_of(c), ti = log.schema().index_of(t);
    auto runs = detail::sort_by_case(log, ci, ti);
    std::uint64_t unused = 0;
    auto cells = chunked(runs.starts.size(), unused,
                         [&](std::size_t lo, std::size_t hi, std::vector<Value> &out, std::uint64_t &) {
                             for (std::size_t k = lo; k < hi; ++k) {
                                 std::size_t end = k + 1 < runs.starts.size() ? runs.starts[k + 1] : runs.order.size();
                                 detail::emit_case(log, runs.order, runs.starts[k], end, ti, out);
                             }
                         });
    return Relation::from_cells(df_schema(log.schema()), std::move(cells));
}

} // namespace dfq::kernels::parallel
