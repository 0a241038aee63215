#pragma once

#include "dfq/errors.hpp"
#include "dfq/relation.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace dfq::kernels::detail {

/// Row indices of `log` with a present case value, ordered by (case, time), plus the start of each case run.
struct CaseRuns
{
    std::vector<std::size_t> order;
    std::vector<std::size_t> starts; ///< one past the last run is `order.size()`
};

inline CaseRuns sort_by_case(const Relation &log, std::size_t ci, std::size_t ti)
{
    CaseRuns runs;
    runs.order.reserve(log.size());
    for (std::size_t i = 0; i < log.size(); ++i) {
        Row r = log.row(i);
        if (r[ci].is_absent()) continue;
        if (r[ti].is_absent())
            throw EvalError("event of case " + to_display(r[ci]) + " has no value for '" + log.schema()[ti].name +
                            "'");
        runs.order.push_back(i);
    }
    std::sort(runs.order.begin(), runs.order.end(), [&](std::size_t a, std::size_t b) {
        Row ra = log.row(a), rb = log.row(b);
        if (auto c = ra[ci] <=> rb[ci]; c != 0) return c < 0;
        return ra[ti] < rb[ti];
    });
    for (std::size_t i = 0; i < runs.order.size(); ++i)
        if (i == 0 or log.row(runs.order[i])[ci] != log.row(runs.order[i - 1])[ci]) runs.starts.push_back(i);
    return runs;
}

/// Appends the pairs of one case run `[begin, end)` of `runs.order` to `out`.
inline void emit_case(const Relation &log, const std::vector<std::size_t> &order, std::size_t begin, std::size_t end,
                      std::size_t ti, std::vector<Value> &out)
{
    auto time = [&](std::size_t k) { return log.row(order[k])[ti]; };
    std::size_t prev = begin, cur = begin;
    while (cur < end and time(cur) == time(prev)) ++cur;
    while (cur < end) {
        std::size_t next = cur;
        while (next < end and time(next) == time(cur)) ++next;
        for (std::size_t a = prev; a < cur; ++a)
            for (std::size_t b = cur; b < next; ++b) {
                Row ra = log.row(order[a]), rb = log.row(order[b]);
                out.insert(out.end(), ra.begin(), ra.end());
                out.insert(out.end(), rb.begin(), rb.end());
            }
        prev = cur;
        cur = next;
    }
}

} // namespace dfq::kernels::detail
