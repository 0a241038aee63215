#include "dfq/rules.hpp"

#include "dfq/evaluator.hpp"
#include "dfq/parser.hpp"
#include "dfq/schema_inference.hpp"

#include <algorithm>

namespace dfq {

namespace {

struct RuleInfo
{
    RuleId id;
    std::string_view name;
    std::string_view title;
};

constexpr RuleInfo kRules[] = {
    {RuleId::E1, "E1", "selection cascade"},
    {RuleId::E2, "E2", "selections commute"},
    {RuleId::E3, "E3", "join commutes"},
    {RuleId::E4, "E4", "join associates"},
    {RuleId::E5, "E5", "selection distributes over join"},
    {RuleId::E6, "E6", "selection distributes over minus"},
    {RuleId::E7, "E7", "selection and renaming commute"},
    {RuleId::E8, "E8", "projection and renaming commute"},
    {RuleId::E9, "E9", "projection and selection commute"},
    {RuleId::E10, "E10", "projection distributes over join"},
    {RuleId::E11, "E11", "projection cascade"},
    {RuleId::E12, "E12", "projections commute"},
    {RuleId::E13, "E13", "renaming distributes over join"},
    {RuleId::E14, "E14", "identity projection"},
    {RuleId::E15, "E15", "projection of a total join"},
    {RuleId::E16, "E16", "join distributes over minus"},
    {RuleId::P17, "P17", "directly follows and selection commute"},
    {RuleId::P18, "P18", "directly follows and selection commute 2"},
    {RuleId::P20, "P20", "directly follows and theta join commute"},
    {RuleId::DFP, "DFP", "directly follows and restricted projection commute"},
};

} // namespace

std::string_view to_string(RuleId r) { return kRules[static_cast<std::size_t>(r)].name; }
std::string_view rule_title(RuleId r) { return kRules[static_cast<std::size_t>(r)].title; }

std::optional<RuleId> parse_rule_id(std::string_view s)
{
    for (auto &r : kRules)
        if (r.name == s) return r.id;
    return std::nullopt;
}

std::string_view to_string(Direction d) { return d == Direction::LeftToRight ? "L->R" : "R->L"; }

const std::vector<RuleSpec> &all_rules()
{
    using enum RuleId;
    constexpr auto LR = Direction::LeftToRight, RL = Direction::RightToLeft;
    static const std::vector<RuleSpec> rules = {
        {E1, LR},  {E1, RL},  {E2, LR},  {E3, LR},  {E4, LR},  {E4, RL},  {E5, LR},  {E5, RL},
        {E6, LR},  {E6, RL},  {E7, LR},  {E7, RL},  {E8, LR},  {E8, RL},  {E9, LR},  {E9, RL},
        {E10, LR}, {E10, RL}, {E11, LR}, {E12, LR}, {E13, LR}, {E13, RL}, {E14, LR}, {E15, LR},
        {E16, LR}, {E16, RL}, {P17, LR}, {P17, RL}, {P18, LR}, {P18, RL}, {P20, LR}, {P20, RL},
        {DFP, LR}, {DFP, RL},
    };
    return rules;
}

const std::vector<RuleSpec> &greedy_rules()
{
    using enum RuleId;
    constexpr auto LR = Direction::LeftToRight, RL = Direction::RightToLeft;
    static const std::vector<RuleSpec> rules = {
        {P17, RL}, {P18, RL}, {DFP, RL}, {E1, LR}, {E5, LR}, {E6, LR}, {E7, LR}, {E9, RL},
    };
    return rules;
}

namespace {

struct Ctx
{
    const Catalog &cat;
    bool gate;

    Schema schema(const Expr &e) const { return infer_schema(e, cat); }
};

using Rewrite = std::optional<Expr>;

bool within(const std::set<std::string> &names, const Schema &s)
{
    return std::all_of(names.begin(), names.end(), [&](auto &n) { return s.contains(n); });
}

bool same_set(const std::vector<std::string> &a, const std::vector<std::string> &b)
{
    return std::set<std::string>(a.begin(), a.end()) == std::set<std::string>(b.begin(), b.end());
}

std::vector<std::string> renamed_list(std::vector<std::string> v, const std::string &from, const std::string &to)
{
    for (auto &x : v)
        if (x == from) x = to;
    return v;
}

std::map<std::string, std::string> prefix_map(const Condition &c, std::string_view p)
{
    std::map<std::string, std::string> m;
    for (auto &a : attrs(c)) m[a] = prefixed_name(p, a);
    return m;
}

/// Strips `p.` from every attribute of `c`; nullopt if some attribute lacks it.
std::optional<Condition> unprefixed(const Condition &c, std::string_view p)
{
    std::map<std::string, std::string> m;
    std::string lead = std::string(p) + ".";
    for (auto &a : attrs(c)) {
        if (not a.starts_with(lead)) return std::nullopt;
        m[a] = a.substr(lead.size());
    }
    return substitute(c, m);
}

/// Base relation and attribute an attribute of `e` is copied from, if the path only passes row-preserving operators.
struct Origin
{
    std::string base, attr;
};

std::optional<Origin> trace(const Expr &e, const std::string &attr)
{
    if (auto *b = e.as<BaseRel>()) return Origin{b->name, attr};
    if (auto *n = e.as<Select>()) return trace(n->child, attr);
    if (auto *n = e.as<Project>()) return trace(n->child, attr);
    if (auto *n = e.as<Intersect>()) return trace(n->left, attr);
    if (auto *n = e.as<Minus>()) return trace(n->left, attr);
    if (auto *n = e.as<RenameAttr>()) {
        if (attr == n->to) return trace(n->child, n->from);
        if (attr == n->from) return std::nullopt;
        return trace(n->child, attr);
    }
    if (auto *n = e.as<RenamePrefix>()) {
        std::string lead = n->prefix + ".";
        if (not attr.starts_with(lead)) return std::nullopt;
        return trace(n->child, attr.substr(lead.size()));
    }
    return std::nullopt;
}

/// Every comparison mentions `a` and there is no negation, so the condition is false whenever `a` is absent.
bool false_when_absent(const Condition &c, const std::string &a)
{
    if (auto *n = c.as<Comparison>()) {
        for (auto *o : {&n->lhs, &n->rhs})
            if (auto *r = std::get_if<AttrRef>(o); r and r->name == a) return true;
        return false;
    }
    if (auto *n = c.as<AndCond>()) return false_when_absent(n->lhs, a) or false_when_absent(n->rhs, a);
    if (auto *n = c.as<OrCond>()) return false_when_absent(n->lhs, a) and false_when_absent(n->rhs, a);
    return false;
}

/// Class of `a` inside `log`, requiring that `c`/`t` are the declared case and time attributes of its base relation.
AttrClass traced_class(const Ctx &ctx, const Expr &log, const std::string &c, const std::string &t,
                       const std::string &a)
{
    auto oa = trace(log, a);
    if (not oa) throw SideConditionUnverified("class of '" + a + "' cannot be traced to a base relation");
    const RelationMeta &meta = ctx.cat.meta(oa->base);
    AttrClass cls = meta.class_of(oa->attr);
    if (cls == AttrClass::Other)
        throw SideConditionUnverified("'" + a + "' is not declared a case or event attribute of '" + oa->base + "'");
    auto oc = trace(log, c), ot = trace(log, t);
    if (not oc or not ot or oc->base != oa->base or ot->base != oa->base or meta.case_attr != oc->attr or
        meta.time_attr != ot->attr)
        throw SideConditionUnverified("df(" + c + ", " + t + ") does not use the declared case and time attributes of '" +
                                      oa->base + "'");
    return cls;
}

void require_totality(const Ctx &ctx, const Expr &join)
{
    if (not ctx.gate) return;
    std::string key = render(join);
    if (not ctx.cat.has_totality_fact(key)) throw SideConditionUnverified("no totality declaration for " + key);
}

// --- classical equivalences ---

Rewrite e1(const Expr &n, Direction d)
{
    auto *s = n.as<Select>();
    if (not s) return std::nullopt;
    if (d == Direction::LeftToRight) {
        auto *a = s->cond.as<AndCond>();
        if (not a) return std::nullopt;
        return Expr::select(a->lhs, Expr::select(a->rhs, s->child));
    }
    auto *inner = s->child.as<Select>();
    if (not inner) return std::nullopt;
    return Expr::select(Condition::conj(s->cond, inner->cond), inner->child);
}

Rewrite e2(const Expr &n)
{
    auto *s = n.as<Select>();
    auto *inner = s ? s->child.as<Select>() : nullptr;
    if (not inner) return std::nullopt;
    return Expr::select(inner->cond, Expr::select(s->cond, inner->child));
}

Rewrite e3(const Expr &n)
{
    auto *j = n.as<Join>();
    if (not j) return std::nullopt;
    return Expr::join(j->cond, j->right, j->left);
}

Rewrite e4(const Ctx &ctx, const Expr &n, Direction d)
{
    auto *j = n.as<Join>();
    if (not j) return std::nullopt;
    if (d == Direction::LeftToRight) {
        auto *l = j->left.as<Join>();
        if (not l) return std::nullopt;
        if (not within(attrs(j->cond), ctx.schema(l->right).concat(ctx.schema(j->right))))
            throw SideConditionUnverified("outer condition mentions attributes of the first operand");
        return Expr::join(l->cond, l->left, Expr::join(j->cond, l->right, j->right));
    }
    auto *r = j->right.as<Join>();
    if (not r) return std::nullopt;
    if (not within(attrs(j->cond), ctx.schema(j->left).concat(ctx.schema(r->left))))
        throw SideConditionUnverified("outer condition mentions attributes of the last operand");
    return Expr::join(r->cond, Expr::join(j->cond, j->left, r->left), r->right);
}

Rewrite e5(const Ctx &ctx, const Expr &n, Direction d)
{
    if (d == Direction::LeftToRight) {
        auto *s = n.as<Select>();
        auto *j = s ? s->child.as<Join>() : nullptr;
        if (not j) return std::nullopt;
        auto used = attrs(s->cond);
        if (within(used, ctx.schema(j->left))) return Expr::join(j->cond, Expr::select(s->cond, j->left), j->right);
        if (within(used, ctx.schema(j->right))) return Expr::join(j->cond, j->left, Expr::select(s->cond, j->right));
        throw SideConditionUnverified("selection mentions attributes of both join operands");
    }
    auto *j = n.as<Join>();
    if (not j) return std::nullopt;
    if (auto *l = j->left.as<Select>()) return Expr::select(l->cond, Expr::join(j->cond, l->child, j->right));
    if (auto *r = j->right.as<Select>()) return Expr::select(r->cond, Expr::join(j->cond, j->left, r->child));
    return std::nullopt;
}

Rewrite e6(const Expr &n, Direction d)
{
    if (d == Direction::LeftToRight) {
        auto *s = n.as<Select>();
        auto *m = s ? s->child.as<Minus>() : nullptr;
        if (not m) return std::nullopt;
        return Expr::minus(Expr::select(s->cond, m->left), Expr::select(s->cond, m->right));
    }
    auto *m = n.as<Minus>();
    if (not m) return std::nullopt;
    auto *l = m->left.as<Select>();
    auto *r = m->right.as<Select>();
    if (not l or not r or not(l->cond == r->cond)) return std::nullopt;
    return Expr::select(l->cond, Expr::minus(l->child, r->child));
}

Rewrite e7(const Expr &n, Direction d)
{
    if (d == Direction::LeftToRight) {
        auto *s = n.as<Select>();
        auto *r = s ? s->child.as<RenameAttr>() : nullptr;
        if (not r) return std::nullopt;
        return Expr::rename(r->from, r->to, Expr::select(substitute(s->cond, {{r->to, r->from}}), r->child));
    }
    auto *r = n.as<RenameAttr>();
    auto *s = r ? r->child.as<Select>() : nullptr;
    if (not s) return std::nullopt;
    return Expr::select(substitute(s->cond, {{r->from, r->to}}), Expr::rename(r->from, r->to, s->child));
}

Rewrite e8(const Expr &n, Direction d)
{
    if (d == Direction::LeftToRight) {
        auto *p = n.as<Project>();
        auto *r = p ? p->child.as<RenameAttr>() : nullptr;
        if (not r) return std::nullopt;
        if (std::find(p->attrs.begin(), p->attrs.end(), r->to) == p->attrs.end())
            throw SideConditionUnverified("projection drops the renamed attribute '" + r->to + "'");
        return Expr::rename(r->from, r->to, Expr::project(renamed_list(p->attrs, r->to, r->from), r->child));
    }
    auto *r = n.as<RenameAttr>();
    auto *p = r ? r->child.as<Project>() : nullptr;
    if (not p) return std::nullopt;
    return Expr::project(renamed_list(p->attrs, r->from, r->to), Expr::rename(r->from, r->to, p->child));
}

Rewrite e9(const Expr &n, Direction d)
{
    if (d == Direction::LeftToRight) {
        auto *p = n.as<Project>();
        auto *s = p ? p->child.as<Select>() : nullptr;
        if (not s) return std::nullopt;
        for (auto &a : attrs(s->cond))
            if (std::find(p->attrs.begin(), p->attrs.end(), a) == p->attrs.end())
                throw SideConditionUnverified("selection uses '" + a + "', which the projection drops");
        return Expr::select(s->cond, Expr::project(p->attrs, s->child));
    }
    auto *s = n.as<Select>();
    auto *p = s ? s->child.as<Project>() : nullptr;
    if (not p) return std::nullopt;
    return Expr::project(p->attrs, Expr::select(s->cond, p->child));
}

Rewrite e10(const Ctx &ctx, const Expr &n, Direction d)
{
    if (d == Direction::LeftToRight) {
        auto *p = n.as<Project>();
        auto *j = p ? p->child.as<Join>() : nullptr;
        if (not j) return std::nullopt;
        for (auto &a : attrs(j->cond))
            if (std::find(p->attrs.begin(), p->attrs.end(), a) == p->attrs.end())
                throw SideConditionUnverified("join condition uses '" + a + "', which the projection drops");
        Schema ls = ctx.schema(j->left);
        std::vector<std::string> al, ar;
        for (auto &a : p->attrs) (ls.contains(a) ? al : ar).push_back(a);
        if (al.empty() or ar.empty()) throw SideConditionUnverified("projection keeps attributes of one operand only");
        return Expr::join(j->cond, Expr::project(al, j->left), Expr::project(ar, j->right));
    }
    auto *j = n.as<Join>();
    auto *l = j ? j->left.as<Project>() : nullptr;
    auto *r = j ? j->right.as<Project>() : nullptr;
    if (not l or not r) return std::nullopt;
    std::vector<std::string> all = l->attrs;
    all.insert(all.end(), r->attrs.begin(), r->attrs.end());
    return Expr::project(all, Expr::join(j->cond, l->child, r->child));
}

Rewrite e11(const Expr &n)
{
    auto *p = n.as<Project>();
    auto *inner = p ? p->child.as<Project>() : nullptr;
    if (not inner) return std::nullopt;
    return Expr::project(p->attrs, inner->child);
}

Rewrite e12(const Expr &n)
{
    auto *p = n.as<Project>();
    auto *inner = p ? p->child.as<Project>() : nullptr;
    if (not inner) return std::nullopt;
    if (not same_set(p->attrs, inner->attrs))
        throw SideConditionUnverified("the two projections keep different attributes");
    return Expr::project(inner->attrs, Expr::project(p->attrs, inner->child));
}

Rewrite e13(const Ctx &ctx, const Expr &n, Direction d)
{
    if (d == Direction::LeftToRight) {
        auto *r = n.as<RenameAttr>();
        auto *j = r ? r->child.as<Join>() : nullptr;
        if (not j) return std::nullopt;
        Condition cond = substitute(j->cond, {{r->from, r->to}});
        if (ctx.schema(j->left).contains(r->from))
            return Expr::join(cond, Expr::rename(r->from, r->to, j->left), j->right);
        return Expr::join(cond, j->left, Expr::rename(r->from, r->to, j->right));
    }
    auto *j = n.as<Join>();
    if (not j) return std::nullopt;
    if (auto *l = j->left.as<RenameAttr>())
        return Expr::rename(l->from, l->to, Expr::join(substitute(j->cond, {{l->to, l->from}}), l->child, j->right));
    if (auto *r = j->right.as<RenameAttr>())
        return Expr::rename(r->from, r->to, Expr::join(substitute(j->cond, {{r->to, r->from}}), j->left, r->child));
    return std::nullopt;
}

Rewrite e14(const Ctx &ctx, const Expr &n)
{
    auto *p = n.as<Project>();
    if (not p) return std::nullopt;
    if (not same_set(p->attrs, ctx.schema(p->child).names()))
        throw SideConditionUnverified("projection drops attributes");
    return p->child;
}

Rewrite e15(const Ctx &ctx, const Expr &n)
{
    auto *p = n.as<Project>();
    auto *j = p ? p->child.as<Join>() : nullptr;
    if (not j) return std::nullopt;
    if (not same_set(p->attrs, ctx.schema(j->left).names()))
        throw SideConditionUnverified("projection does not keep exactly the left operand's attributes");
    require_totality(ctx, p->child);
    return j->left;
}

Rewrite e16(const Expr &n, Direction d)
{
    if (d == Direction::LeftToRight) {
        auto *j = n.as<Join>();
        auto *m = j ? j->left.as<Minus>() : nullptr;
        if (not m) return std::nullopt;
        return Expr::minus(Expr::join(j->cond, m->left, j->right), Expr::join(j->cond, m->right, j->right));
    }
    auto *m = n.as<Minus>();
    auto *l = m ? m->left.as<Join>() : nullptr;
    auto *r = m ? m->right.as<Join>() : nullptr;
    if (not l or not r or not(l->cond == r->cond) or not(l->right == r->right)) return std::nullopt;
    return Expr::join(l->cond, Expr::minus(l->left, r->left), l->right);
}

// --- directly-follows rules ---

Rewrite p17(const Ctx &ctx, const Expr &n, Direction d)
{
    auto gate = [&](const Expr &log, const DirectlyFollows &df, const Condition &cond, const std::string &a) {
        if (not ctx.gate) return;
        AttrClass cls = traced_class(ctx, log, df.case_attr, df.time_attr, a);
        if (cls == AttrClass::Event and not false_when_absent(cond, a))
            throw SideConditionUnverified("condition on event attribute '" + a + "' holds for absent values");
    };
    if (d == Direction::LeftToRight) {
        auto *df = n.as<DirectlyFollows>();
        auto *s = df ? df->child.as<Select>() : nullptr;
        if (not s) return std::nullopt;
        auto used = attrs(s->cond);
        if (used.size() != 1) return std::nullopt;
        const std::string a = *used.begin();
        gate(s->child, *df, s->cond, a);
        Condition down = substitute(s->cond, {{a, prefixed_name(kDownPrefix, a)}});
        Condition up = substitute(s->cond, {{a, prefixed_name(kUpPrefix, a)}});
        return Expr::select(Condition::conj(down, up), Expr::df(df->case_attr, df->time_attr, s->child));
    }
    auto *s = n.as<Select>();
    auto *df = s ? s->child.as<DirectlyFollows>() : nullptr;
    if (not df) return std::nullopt;
    auto parts = conjuncts(s->cond);
    const std::string lead = std::string(kDownPrefix) + ".";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        auto used = attrs(parts[i]);
        if (used.size() != 1 or not used.begin()->starts_with(lead)) continue;
        const std::string da = *used.begin(), a = da.substr(lead.size());
        Condition up = substitute(parts[i], {{da, prefixed_name(kUpPrefix, a)}});
        for (std::size_t j = 0; j < parts.size(); ++j) {
            if (j == i or not(parts[j] == up)) continue;
            Condition base = substitute(parts[i], {{da, a}});
            gate(df->child, *df, base, a);
            Expr out = Expr::df(df->case_attr, df->time_attr, Expr::select(base, df->child));
            std::vector<Condition> rest;
            for (std::size_t k = 0; k < parts.size(); ++k)
                if (k != i and k != j) rest.push_back(parts[k]);
            return rest.empty() ? out : Expr::select(Condition::all_of(rest), out);
        }
    }
    return std::nullopt;
}

Condition p18_condition(const std::string &a, CompareOp op, const std::string &b)
{
    auto dn = [](const std::string &x) { return prefixed_name(kDownPrefix, x); };
    auto up = [](const std::string &x) { return prefixed_name(kUpPrefix, x); };
    return Condition::all_of({attr_cmp_attr(dn(a), op, dn(b)), attr_cmp_attr(dn(a), op, up(b)),
                              attr_cmp_attr(up(a), op, dn(b)), attr_cmp_attr(up(a), op, up(b))});
}

Rewrite p18(const Ctx &ctx, const Expr &n, Direction d)
{
    auto gate = [&](const Expr &log, const DirectlyFollows &df, const std::string &a, const std::string &b) {
        if (not ctx.gate) return;
        traced_class(ctx, log, df.case_attr, df.time_attr, a);
        traced_class(ctx, log, df.case_attr, df.time_attr, b);
    };
    auto attr_pair = [](const Condition &c) -> std::optional<std::tuple<std::string, CompareOp, std::string>> {
        auto *cmp = c.as<Comparison>();
        if (not cmp) return std::nullopt;
        auto *a = std::get_if<AttrRef>(&cmp->lhs);
        auto *b = std::get_if<AttrRef>(&cmp->rhs);
        if (not a or not b or a->name == b->name) return std::nullopt;
        return std::tuple{a->name, cmp->op, b->name};
    };
    if (d == Direction::LeftToRight) {
        auto *df = n.as<DirectlyFollows>();
        auto *s = df ? df->child.as<Select>() : nullptr;
        if (not s) return std::nullopt;
        auto pair = attr_pair(s->cond);
        if (not pair) return std::nullopt;
        auto &[a, op, b] = *pair;
        gate(s->child, *df, a, b);
        return Expr::select(p18_condition(a, op, b), Expr::df(df->case_attr, df->time_attr, s->child));
    }
    auto *s = n.as<Select>();
    auto *df = s ? s->child.as<DirectlyFollows>() : nullptr;
    if (not df) return std::nullopt;
    auto parts = conjuncts(s->cond);
    const std::string lead = std::string(kDownPrefix) + ".";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        auto pair = attr_pair(parts[i]);
        if (not pair) continue;
        auto &[da, op, db] = *pair;
        if (not da.starts_with(lead) or not db.starts_with(lead)) continue;
        std::string a = da.substr(lead.size()), b = db.substr(lead.size());
        auto wanted = conjuncts(p18_condition(a, op, b));
        std::vector<std::size_t> used;
        for (auto &w : wanted) {
            for (std::size_t k = 0; k < parts.size(); ++k)
                if (parts[k] == w and std::find(used.begin(), used.end(), k) == used.end()) {
                    used.push_back(k);
                    break;
                }
        }
        if (used.size() != wanted.size()) continue;
        gate(df->child, *df, a, b);
        Expr out = Expr::df(df->case_attr, df->time_attr, Expr::select(attr_cmp_attr(a, op, b), df->child));
        std::vector<Condition> rest;
        for (std::size_t k = 0; k < parts.size(); ++k)
            if (std::find(used.begin(), used.end(), k) == used.end()) rest.push_back(parts[k]);
        return rest.empty() ? out : Expr::select(Condition::all_of(rest), out);
    }
    return std::nullopt;
}

Rewrite p20(const Ctx &ctx, const Expr &n, Direction d)
{
    const std::string dn(kDownPrefix), up(kUpPrefix);
    if (d == Direction::LeftToRight) {
        auto *df = n.as<DirectlyFollows>();
        auto *j = df ? df->child.as<Join>() : nullptr;
        if (not j) return std::nullopt;
        Schema rs = ctx.schema(j->left);
        if (not rs.contains(df->case_attr) or not rs.contains(df->time_attr))
            throw SideConditionUnverified("case and time attributes must come from the left join operand");
        require_totality(ctx, df->child);
        Expr pairs = Expr::df(df->case_attr, df->time_attr, j->left);
        Expr down = Expr::join(substitute(j->cond, prefix_map(j->cond, dn)), pairs, Expr::prefix(dn, j->right));
        return Expr::join(substitute(j->cond, prefix_map(j->cond, up)), down, Expr::prefix(up, j->right));
    }
    auto *outer = n.as<Join>();
    auto *inner = outer ? outer->left.as<Join>() : nullptr;
    auto *df = inner ? inner->left.as<DirectlyFollows>() : nullptr;
    auto *sd = inner ? inner->right.as<RenamePrefix>() : nullptr;
    auto *su = outer ? outer->right.as<RenamePrefix>() : nullptr;
    if (not df or not sd or not su or sd->prefix != dn or su->prefix != up or not(sd->child == su->child))
        return std::nullopt;
    auto cond = unprefixed(inner->cond, dn);
    if (not cond or not(substitute(*cond, prefix_map(*cond, up)) == outer->cond)) return std::nullopt;
    Expr join = Expr::join(*cond, df->child, sd->child);
    require_totality(ctx, join);
    return Expr::df(df->case_attr, df->time_attr, join);
}

Rewrite dfp(const Expr &n, Direction d)
{
    const std::string dn(kDownPrefix), up(kUpPrefix);
    auto keeps_key = [](const std::vector<std::string> &as, const DirectlyFollows &df) {
        return std::find(as.begin(), as.end(), df.case_attr) != as.end() and
               std::find(as.begin(), as.end(), df.time_attr) != as.end();
    };
    if (d == Direction::LeftToRight) {
        auto *df = n.as<DirectlyFollows>();
        auto *p = df ? df->child.as<Project>() : nullptr;
        if (not p) return std::nullopt;
        if (not keeps_key(p->attrs, *df)) return std::nullopt;
        std::vector<std::string> out;
        for (auto &a : p->attrs) out.push_back(prefixed_name(dn, a));
        for (auto &a : p->attrs) out.push_back(prefixed_name(up, a));
        return Expr::project(out, Expr::df(df->case_attr, df->time_attr, p->child));
    }
    auto *p = n.as<Project>();
    auto *df = p ? p->child.as<DirectlyFollows>() : nullptr;
    if (not df or p->attrs.size() % 2 != 0) return std::nullopt;
    const std::size_t k = p->attrs.size() / 2;
    std::vector<std::string> base;
    for (std::size_t i = 0; i < k; ++i) {
        const std::string &x = p->attrs[i], &y = p->attrs[k + i];
        if (not x.starts_with(dn + ".")) return std::nullopt;
        std::string a = x.substr(dn.size() + 1);
        if (y != prefixed_name(up, a)) return std::nullopt;
        base.push_back(a);
    }
    if (not keeps_key(base, *df)) return std::nullopt;
    return Expr::df(df->case_attr, df->time_attr, Expr::project(base, df->child));
}

Rewrite rewrite(const Ctx &ctx, RuleId rule, Direction d, const Expr &n)
{
    switch (rule) {
        case RuleId::E1: return e1(n, d);
        case RuleId::E2: return e2(n);
        case RuleId::E3: return e3(n);
        case RuleId::E4: return e4(ctx, n, d);
        case RuleId::E5: return e5(ctx, n, d);
        case RuleId::E6: return e6(n, d);
        case RuleId::E7: return e7(n, d);
        case RuleId::E8: return e8(n, d);
        case RuleId::E9: return e9(n, d);
        case RuleId::E10: return e10(ctx, n, d);
        case RuleId::E11: return d == Direction::LeftToRight ? e11(n) : std::nullopt;
        case RuleId::E12: return e12(n);
        case RuleId::E13: return e13(ctx, n, d);
        case RuleId::E14: return d == Direction::LeftToRight ? e14(ctx, n) : std::nullopt;
        case RuleId::E15: return d == Direction::LeftToRight ? e15(ctx, n) : std::nullopt;
        case RuleId::E16: return e16(n, d);
        case RuleId::P17: return p17(ctx, n, d);
        case RuleId::P18: return p18(ctx, n, d);
        case RuleId::P20: return p20(ctx, n, d);
        case RuleId::DFP: return dfp(n, d);
    }
    return std::nullopt;
}

std::optional<std::pair<Expr, Expr>> rewrite_checked(const Ctx &ctx, RuleId rule, Direction d, const Expr &root,
                                                     const NodePath &path)
{
    Expr n = subtree(root, path);
    Schema before = ctx.schema(n);
    auto r = rewrite(ctx, rule, d, n);
    if (not r) return std::nullopt;
    try {
        if (not(ctx.schema(*r) == before))
            throw SideConditionUnverified("rewrite would change the schema " + to_string(before));
    } catch (const SchemaError &err) {
        throw SideConditionUnverified(std::string("rewritten node is ill-formed: ") + err.what());
    }
    return std::pair{n, *r};
}

} // namespace

std::optional<Expr> try_apply_rule(RuleId rule, Direction dir, const Expr &root, const NodePath &path,
                                   const Catalog &cat)
{
    auto r = rewrite_checked(Ctx{cat, true}, rule, dir, root, path);
    if (not r) return std::nullopt;
    return replace_subtree(root, path, r->second);
}

Expr apply_rule(RuleId rule, Direction dir, const Expr &root, const NodePath &path, const Catalog &cat)
{
    auto r = try_apply_rule(rule, dir, root, path, cat);
    if (not r)
        throw PatternMismatch(std::string(to_string(rule)) + " " + std::string(to_string(dir)) +
                              " does not match the node at " + to_string(path));
    return *r;
}

bool verify_rule_on_instance(RuleId rule, Direction dir, const Expr &root, const NodePath &path, const Catalog &cat)
{
    auto r = rewrite_checked(Ctx{cat, false}, rule, dir, root, path);
    if (not r)
        throw PatternMismatch(std::string(to_string(rule)) + " " + std::string(to_string(dir)) +
                              " does not match the node at " + to_string(path));
    EvalConfig cfg;
    return relation_equal(evaluate(r->first, cat, cfg), evaluate(r->second, cat, cfg));
}

} // namespace dfq
