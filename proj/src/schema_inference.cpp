#include "dfq/schema_inference.hpp"

#include "dfq/errors.hpp"

namespace dfq {

namespace {

std::optional<Domain> operand_domain(const Operand &o, const Schema &schema, const NodePath &at)
{
    if (auto *a = std::get_if<AttrRef>(&o)) {
        auto i = schema.find(a->name);
        if (not i)
            throw SchemaError(SchemaErrorKind::UnknownAttribute,
                              "condition names '" + a->name + "', not in " + to_string(schema), at);
        return schema[*i].domain;
    }
    return std::get<Value>(o).domain();
}

Schema infer_at(const Expr &e, const Catalog &cat, NodePath &path);

Schema child_schema(const Expr &child, std::size_t index, const Catalog &cat, NodePath &path)
{
    path.push_back(index);
    Schema s = infer_at(child, cat, path);
    path.pop_back();
    return s;
}

Schema guarded(const NodePath &path, auto &&f)
{
    try {
        return f();
    } catch (const SchemaError &err) {
        if (not err.location().empty()) throw;
        throw err.relocated(path);
    }
}

Schema infer_at(const Expr &e, const Catalog &cat, NodePath &path)
{
    return std::visit(
        [&](auto &n) -> Schema {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, BaseRel>) {
                return cat.relation(n.name).schema();
            } else if constexpr (std::is_same_v<T, Select>) {
                Schema s = child_schema(n.child, 0, cat, path);
                check_condition(n.cond, s, path);
                return s;
            } else if constexpr (std::is_same_v<T, Project>) {
                Schema s = child_schema(n.child, 0, cat, path);
                return guarded(path, [&] { return s.restricted(n.attrs); });
            } else if constexpr (std::is_same_v<T, RenameAttr>) {
                Schema s = child_schema(n.child, 0, cat, path);
                return guarded(path, [&] {
                    if (n.to.empty()) throw SchemaError(SchemaErrorKind::UnknownAttribute, "empty target name");
                    return s.renamed(n.from, n.to);
                });
            } else if constexpr (std::is_same_v<T, RenamePrefix>) {
                Schema s = child_schema(n.child, 0, cat, path);
                if (n.prefix.empty()) throw SchemaError(SchemaErrorKind::UnknownAttribute, "empty prefix", path);
                return s.prefixed(n.prefix);
            } else if constexpr (std::is_same_v<T, Product> or std::is_same_v<T, Join>) {
                Schema l = child_schema(n.left, 0, cat, path);
                Schema r = child_schema(n.right, 1, cat, path);
                Schema out = guarded(path, [&] { return l.concat(r); });
                if constexpr (std::is_same_v<T, Join>) check_condition(n.cond, out, path);
                return out;
            } else if constexpr (std::is_same_v<T, DirectlyFollows>) {
                Schema s = child_schema(n.child, 0, cat, path);
                guarded(path, [&] {
                    s.index_of(n.case_attr);
                    s.index_of(n.time_attr);
                    return s;
                });
                return guarded(path, [&] { return s.prefixed(kDownPrefix).concat(s.prefixed(kUpPrefix)); });
            } else {
                Schema l = child_schema(n.left, 0, cat, path);
                Schema r = child_schema(n.right, 1, cat, path);
                if (not(l == r))
                    throw SchemaError(SchemaErrorKind::SchemaMismatch,
                                      "set operands differ: " + to_string(l) + " vs " + to_string(r), path);
                return l;
            }
        },
        e.node());
}

} // namespace

void check_condition(const Condition &cond, const Schema &schema, const NodePath &at)
{
    if (auto *c = cond.as<Comparison>()) {
        auto l = operand_domain(c->lhs, schema, at);
        auto r = operand_domain(c->rhs, schema, at);
        if (l and r and *l != *r)
            throw SchemaError(SchemaErrorKind::TypeMismatch,
                              "'" + render(cond) + "' compares " + std::string(to_string(*l)) + " with " +
                                  std::string(to_string(*r)),
                              at);
    } else if (auto *n = cond.as<NotCond>()) {
        check_condition(n->operand, schema, at);
    } else if (auto *a = cond.as<AndCond>()) {
        check_condition(a->lhs, schema, at);
        check_condition(a->rhs, schema, at);
    } else if (auto *o = cond.as<OrCond>()) {
        check_condition(o->lhs, schema, at);
        check_condition(o->rhs, schema, at);
    }
}

Schema infer_schema(const Expr &e, const Catalog &cat)
{
    NodePath path;
    return infer_at(e, cat, path);
}

Expr expand_df(const Expr &e, const Catalog &cat)
{
    auto *df = e.as<DirectlyFollows>();
    if (not df) throw InvalidArgument("expand_df applied to a " + std::string(to_string(e.kind())) + " node");
    return expand_df(e, infer_schema(df->child, cat).names());
}

} // namespace dfq
