#include "dfq/kernels.hpp"

#include "dfq/errors.hpp"

#include <algorithm>

namespace dfq::kernels {

int BoundCondition::compile(const Condition &c, const Schema &schema)
{
    Node n{};
    auto side = [&](const Operand &o) {
        Side s;
        if (auto *a = std::get_if<AttrRef>(&o))
            s.column = static_cast<int>(schema.index_of(a->name));
        else
            s.literal = std::get<Value>(o);
        return s;
    };
    if (auto *cmp = c.as<Comparison>()) {
        n.kind = Node::Cmp;
        n.op = cmp->op;
        n.lhs = side(cmp->lhs);
        n.rhs = side(cmp->rhs);
    } else if (auto *x = c.as<AndCond>()) {
        n.kind = Node::And;
        n.a = compile(x->lhs, schema);
        n.b = compile(x->rhs, schema);
    } else if (auto *x = c.as<OrCond>()) {
        n.kind = Node::Or;
        n.a = compile(x->lhs, schema);
        n.b = compile(x->rhs, schema);
    } else {
        n.kind = Node::Not;
        n.a = compile(c.as<NotCond>()->operand, schema);
    }
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size() - 1);
}

BoundCondition::BoundCondition(const Condition &c, const Schema &schema) { root_ = compile(c, schema); }

bool BoundCondition::eval(int node, Row left, Row right) const
{
    const Node &n = nodes_[node];
    auto value = [&](const Side &s) -> const Value & {
        if (s.column < 0) return s.literal;
        auto i = static_cast<std::size_t>(s.column);
        return i < left.size() ? left[i] : right[i - left.size()];
    };
    switch (n.kind) {
        case Node::Cmp: return compare(value(n.lhs), n.op, value(n.rhs));
        case Node::And: return eval(n.a, left, right) and eval(n.b, left, right);
        case Node::Or: return eval(n.a, left, right) or eval(n.b, left, right);
        case Node::Not: return not eval(n.a, left, right);
    }
    return false;
}

std::vector<std::pair<std::size_t, std::size_t>> equi_keys(const Condition &cond, const Schema &left,
                                                           const Schema &right)
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (auto &c : conjuncts(cond)) {
        auto *cmp = c.as<Comparison>();
        if (not cmp or cmp->op != CompareOp::Eq) continue;
        auto *a = std::get_if<AttrRef>(&cmp->lhs);
        auto *b = std::get_if<AttrRef>(&cmp->rhs);
        if (not a or not b) continue;
        if (auto i = left.find(a->name), j = right.find(b->name); i and j)
            out.emplace_back(*i, *j);
        else if (auto i = left.find(b->name), j = right.find(a->name); i and j)
            out.emplace_back(*i, *j);
    }
    return out;
}

Relation project(const Relation &r, const std::vector<std::string> &attrs)
{
    Schema s = r.schema().restricted(attrs);
    std::vector<std::size_t> idx;
    for (auto &a : attrs) idx.push_back(r.schema().index_of(a));
    bool prefix_order = true;
    for (std::size_t i = 0; i < idx.size(); ++i) prefix_order = prefix_order and idx[i] == i;

    std::vector<Value> cells;
    cells.reserve(r.size() * idx.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        Row row = r.row(i);
        for (auto j : idx) cells.push_back(row[j]);
    }
    if (not prefix_order) return Relation::from_cells(std::move(s), std::move(cells));

    // Leading columns of a sorted relation stay sorted; only adjacent duplicates remain.
    const std::size_t k = idx.size();
    std::vector<Value> out;
    out.reserve(cells.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        Row cur(cells.data() + i * k, k);
        if (not out.empty() and row_equal(cur, Row(out.data() + out.size() - k, k))) continue;
        out.insert(out.end(), cur.begin(), cur.end());
    }
    return Relation::from_sorted_cells(std::move(s), std::move(out));
}

Relation rename(const Relation &r, const std::string &from, const std::string &to)
{
    return Relation::from_sorted_cells(r.schema().renamed(from, to), r.cells());
}

Relation prefix(const Relation &r, const std::string &p)
{
    return Relation::from_sorted_cells(r.schema().prefixed(p), r.cells());
}

namespace {

enum class SetOp { Union, Intersect, Minus };

Relation merge(const Relation &l, const Relation &r0, SetOp op)
{
    Relation r = r0.aligned_to(l.schema());
    const std::size_t k = l.arity();
    std::vector<Value> out;
    std::size_t i = 0, j = 0;
    auto emit = [&](Row row) { out.insert(out.end(), row.begin(), row.end()); };
    while (i < l.size() or j < r.size()) {
        if (j == r.size() or (i < l.size() and row_less(l.row(i), r.row(j)))) {
            if (op != SetOp::Intersect) emit(l.row(i));
            ++i;
        } else if (i == l.size() or row_less(r.row(j), l.row(i))) {
            if (op == SetOp::Union) emit(r.row(j));
            ++j;
        } else {
            if (op != SetOp::Minus) emit(l.row(i));
            ++i;
            ++j;
        }
    }
    if (k == 0) return Relation(l.schema());
    return Relation::from_sorted_cells(l.schema(), std::move(out));
}

} // namespace

Relation set_union(const Relation &l, const Relation &r) { return merge(l, r, SetOp::Union); }
Relation set_intersect(const Relation &l, const Relation &r) { return merge(l, r, SetOp::Intersect); }
Relation set_minus(const Relation &l, const Relation &r) { return merge(l, r, SetOp::Minus); }

Schema df_schema(const Schema &s) { return s.prefixed(kDownPrefix).concat(s.prefixed(kUpPrefix)); }

} // namespace dfq::kernels
