#include "dfq/condition.hpp"

#include "dfq/errors.hpp"

namespace dfq {

Condition Condition::compare(Operand lhs, CompareOp op, Operand rhs)
{
    for (auto *o : {&lhs, &rhs})
        if (auto *v = std::get_if<Value>(o); v and v->is_absent())
            throw InvalidArgument("conditions cannot compare against an absent literal");
    return Condition(std::make_shared<const Node>(Comparison{std::move(lhs), op, std::move(rhs)}));
}

Condition Condition::conj(Condition lhs, Condition rhs)
{
    return Condition(std::make_shared<const Node>(AndCond{std::move(lhs), std::move(rhs)}));
}

Condition Condition::disj(Condition lhs, Condition rhs)
{
    return Condition(std::make_shared<const Node>(OrCond{std::move(lhs), std::move(rhs)}));
}

Condition Condition::negate(Condition c)
{
    return Condition(std::make_shared<const Node>(NotCond{std::move(c)}));
}

Condition Condition::all_of(const std::vector<Condition> &parts)
{
    if (parts.empty()) throw InvalidArgument("all_of needs at least one condition");
    Condition c = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) c = conj(c, parts[i]);
    return c;
}

bool operator==(const Condition &a, const Condition &b)
{
    if (a.node_ == b.node_) return true;
    if (a.node().index() != b.node().index()) return false;
    if (auto *x = a.as<Comparison>()) {
        auto *y = b.as<Comparison>();
        return x->op == y->op and x->lhs == y->lhs and x->rhs == y->rhs;
    }
    if (auto *x = a.as<AndCond>()) {
        auto *y = b.as<AndCond>();
        return x->lhs == y->lhs and x->rhs == y->rhs;
    }
    if (auto *x = a.as<OrCond>()) {
        auto *y = b.as<OrCond>();
        return x->lhs == y->lhs and x->rhs == y->rhs;
    }
    return a.as<NotCond>()->operand == b.as<NotCond>()->operand;
}

Condition attr_cmp(std::string attr, CompareOp op, Value value)
{
    return Condition::compare(AttrRef{std::move(attr)}, op, value);
}

Condition attr_cmp_attr(std::string lhs, CompareOp op, std::string rhs)
{
    return Condition::compare(AttrRef{std::move(lhs)}, op, AttrRef{std::move(rhs)});
}

namespace {

void collect(const Condition &c, std::set<std::string> &out)
{
    std::visit(
        [&](auto &n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Comparison>) {
                for (auto *o : {&n.lhs, &n.rhs})
                    if (auto *a = std::get_if<AttrRef>(o)) out.insert(a->name);
            } else if constexpr (std::is_same_v<T, NotCond>) {
                collect(n.operand, out);
            } else {
                collect(n.lhs, out);
                collect(n.rhs, out);
            }
        },
        c.node());
}

Operand rename_operand(const Operand &o, const std::map<std::string, std::string> &m)
{
    if (auto *a = std::get_if<AttrRef>(&o))
        if (auto it = m.find(a->name); it != m.end()) return AttrRef{it->second};
    return o;
}

std::string render_operand(const Operand &o)
{
    if (auto *a = std::get_if<AttrRef>(&o)) return a->name;
    return to_literal(std::get<Value>(o));
}

} // namespace

std::set<std::string> attrs(const Condition &c)
{
    std::set<std::string> out;
    collect(c, out);
    return out;
}

Condition substitute(const Condition &c, const std::map<std::string, std::string> &mapping)
{
    return std::visit(
        [&](auto &n) -> Condition {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Comparison>)
                return Condition::compare(rename_operand(n.lhs, mapping), n.op, rename_operand(n.rhs, mapping));
            else if constexpr (std::is_same_v<T, AndCond>)
                return Condition::conj(substitute(n.lhs, mapping), substitute(n.rhs, mapping));
            else if constexpr (std::is_same_v<T, OrCond>)
                return Condition::disj(substitute(n.lhs, mapping), substitute(n.rhs, mapping));
            else
                return Condition::negate(substitute(n.operand, mapping));
        },
        c.node());
}

std::vector<Condition> conjuncts(const Condition &c)
{
    if (auto *a = c.as<AndCond>()) {
        auto out = conjuncts(a->lhs);
        auto rest = conjuncts(a->rhs);
        out.insert(out.end(), rest.begin(), rest.end());
        return out;
    }
    return {c};
}

std::string render(const Condition &c)
{
    // Conjunction and disjunction are left-associative: a left child of the same kind needs no parentheses.
    if (auto *n = c.as<Comparison>())
        return render_operand(n->lhs) + " " + std::string(to_string(n->op)) + " " + render_operand(n->rhs);
    if (auto *n = c.as<NotCond>()) return "!(" + render(n->operand) + ")";
    if (auto *n = c.as<AndCond>()) {
        auto side = [](const Condition &x, bool left) {
            bool bare = x.as<Comparison>() or x.as<NotCond>() or (left and x.as<AndCond>());
            return bare ? render(x) : "(" + render(x) + ")";
        };
        return side(n->lhs, true) + " & " + side(n->rhs, false);
    }
    auto *n = c.as<OrCond>();
    auto side = [](const Condition &x, bool left) {
        bool bare = not x.as<OrCond>() or left;
        return bare ? render(x) : "(" + render(x) + ")";
    };
    return side(n->lhs, true) + " | " + side(n->rhs, false);
}

} // namespace dfq
