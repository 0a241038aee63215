#include "dfq/catalog.hpp"

#include "dfq/condition.hpp"
#include "dfq/evaluator.hpp"
#include "dfq/expr.hpp"
#include "dfq/kernels.hpp"

#include <algorithm>
#include <set>

namespace dfq {

std::string_view to_string(AttrClass c)
{
    switch (c) {
        case AttrClass::Case: return "case";
        case AttrClass::Event: return "event";
        case AttrClass::Other: return "other";
    }
    return "?";
}

std::optional<AttrClass> parse_attr_class(std::string_view s)
{
    if (s == "case") return AttrClass::Case;
    if (s == "event") return AttrClass::Event;
    if (s == "other") return AttrClass::Other;
    return std::nullopt;
}

AttrClass RelationMeta::class_of(const std::string &attr) const
{
    auto it = attr_classes.find(attr);
    return it == attr_classes.end() ? AttrClass::Other : it->second;
}

void collect_stats(const Relation &r, RelationMeta &meta)
{
    if (not meta.stats.events) meta.stats.events = r.size();
    if (meta.stats.cases or not meta.case_attr) return;
    auto ci = r.schema().find(*meta.case_attr);
    if (not ci) return;
    std::set<Value> cases;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (auto &v = r.row(i)[*ci]; not v.is_absent()) cases.insert(v);
    meta.stats.cases = cases.size();
}

void Catalog::add(std::string name, Relation relation, RelationMeta meta)
{
    if (name.empty()) throw InvalidArgument("relation name is empty");
    for (auto &a : relation.schema())
        if (has_reserved_prefix(a.name))
            throw InvalidArgument("attribute '" + a.name + "' of '" + name + "' uses a reserved prefix (d. or u.)");
    for (auto *attr : {&meta.case_attr, &meta.time_attr})
        if (*attr and not relation.schema().contains(**attr))
            throw InvalidArgument("'" + name + "' has no attribute '" + **attr + "'");
    entries_.insert_or_assign(std::move(name), Entry{std::move(relation), std::move(meta)});
}

const Relation &Catalog::relation(std::string_view name) const
{
    auto it = entries_.find(name);
    if (it == entries_.end()) throw MissingRelationError("no relation named '" + std::string(name) + "'");
    return it->second.relation;
}

const RelationMeta &Catalog::meta(std::string_view name) const
{
    auto it = entries_.find(name);
    if (it == entries_.end()) throw MissingRelationError("no relation named '" + std::string(name) + "'");
    return it->second.meta;
}

std::vector<std::string> Catalog::names() const
{
    std::vector<std::string> out;
    for (auto &[k, v] : entries_) out.push_back(k);
    return out;
}

bool Catalog::has_totality_fact(const std::string &join_rendering) const
{
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](auto &kv) { return kv.second.meta.totality_facts.contains(join_rendering); });
}

Rational collect_selectivity(const Relation &r, const Condition &cond)
{
    if (r.empty()) return 0;
    kernels::Counters counters;
    auto kept = kernels::serial::select(r, cond, counters);
    return Rational(kept.size(), r.size());
}

std::vector<ClassViolation> validate_classes(const Relation &r, const RelationMeta &meta)
{
    if (not meta.case_attr or not meta.time_attr)
        throw InvalidArgument("class validation needs both a case and a time attribute");
    const Schema &s = r.schema();
    std::size_t ci = s.index_of(*meta.case_attr), ti = s.index_of(*meta.time_attr);

    std::map<Value, std::vector<std::size_t>> cases;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (not r.row(i)[ci].is_absent()) cases[r.row(i)[ci]].push_back(i);
    for (auto &[c, rows] : cases)
        std::stable_sort(rows.begin(), rows.end(),
                         [&](std::size_t a, std::size_t b) { return r.row(a)[ti] < r.row(b)[ti]; });

    std::vector<ClassViolation> out;
    for (auto &[attr, cls] : meta.attr_classes) {
        if (cls == AttrClass::Other) continue;
        std::size_t ai = s.index_of(attr);
        for (auto &[c, rows] : cases) {
            auto value = [&](std::size_t i) { return r.row(i)[ai]; };
            auto time = [&](std::size_t i) { return r.row(i)[ti]; };
            auto report = [&](std::size_t i, std::string reason) {
                out.push_back(ClassViolation{attr, cls, c, time(i), std::move(reason)});
            };
            if (cls == AttrClass::Event) {
                bool seen = false;
                for (auto i : rows) {
                    if (value(i).is_absent()) continue;
                    if (seen) report(i, "second event with a value in this case");
                    seen = true;
                }
                continue;
            }
            auto first = std::find_if(rows.begin(), rows.end(), [&](auto i) { return not value(i).is_absent(); });
            if (first == rows.end()) continue;
            Value v = value(*first);
            Value set_at = time(*first);
            for (auto i : rows) {
                if (value(i).is_absent()) {
                    if (set_at < time(i)) report(i, "value missing after it was set");
                } else if (value(i) != v) {
                    report(i, "value changes from " + to_display(v) + " to " + to_display(value(i)));
                }
            }
        }
    }
    return out;
}

bool check_totality(const Expr &join_expr, const Catalog &cat)
{
    auto *j = join_expr.as<Join>();
    if (not j) throw InvalidArgument("totality applies to join expressions");
    Relation left = evaluate(j->left, cat);
    Relation joined = evaluate(join_expr, cat);
    return kernels::project(joined, left.schema().names()).size() == left.size();
}

} // namespace dfq
