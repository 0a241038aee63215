#include "dfq/expr.hpp"

#include "dfq/relation.hpp"

namespace dfq {

std::string_view to_string(ExprKind k)
{
    switch (k) {
        case ExprKind::BaseRel: return "base";
        case ExprKind::Select: return "select";
        case ExprKind::Project: return "project";
        case ExprKind::RenameAttr: return "rename";
        case ExprKind::RenamePrefix: return "prefix";
        case ExprKind::Product: return "product";
        case ExprKind::Join: return "join";
        case ExprKind::Union: return "union";
        case ExprKind::Intersect: return "intersect";
        case ExprKind::Minus: return "minus";
        case ExprKind::DirectlyFollows: return "df";
    }
    return "?";
}

Expr Expr::base(std::string name) { return Expr(std::make_shared<const Node>(BaseRel{std::move(name)})); }

Expr Expr::select(Condition cond, Expr child)
{
    return Expr(std::make_shared<const Node>(Select{std::move(cond), std::move(child)}));
}

Expr Expr::project(std::vector<std::string> attrs, Expr child)
{
    if (attrs.empty()) throw InvalidArgument("projection needs at least one attribute");
    return Expr(std::make_shared<const Node>(Project{std::move(attrs), std::move(child)}));
}

Expr Expr::rename(std::string from, std::string to, Expr child)
{
    return Expr(std::make_shared<const Node>(RenameAttr{std::move(from), std::move(to), std::move(child)}));
}

Expr Expr::prefix(std::string prefix, Expr child)
{
    return Expr(std::make_shared<const Node>(RenamePrefix{std::move(prefix), std::move(child)}));
}

Expr Expr::product(Expr left, Expr right)
{
    return Expr(std::make_shared<const Node>(Product{std::move(left), std::move(right)}));
}

Expr Expr::join(Condition cond, Expr left, Expr right)
{
    return Expr(std::make_shared<const Node>(Join{std::move(cond), std::move(left), std::move(right)}));
}

Expr Expr::union_of(Expr left, Expr right)
{
    return Expr(std::make_shared<const Node>(Union{std::move(left), std::move(right)}));
}

Expr Expr::intersect(Expr left, Expr right)
{
    return Expr(std::make_shared<const Node>(Intersect{std::move(left), std::move(right)}));
}

Expr Expr::minus(Expr left, Expr right)
{
    return Expr(std::make_shared<const Node>(Minus{std::move(left), std::move(right)}));
}

Expr Expr::df(std::string case_attr, std::string time_attr, Expr child)
{
    return Expr(
        std::make_shared<const Node>(DirectlyFollows{std::move(case_attr), std::move(time_attr), std::move(child)}));
}

std::vector<Expr> Expr::children() const
{
    return std::visit(
        [](auto &n) -> std::vector<Expr> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, BaseRel>)
                return {};
            else if constexpr (requires { n.child; })
                return {n.child};
            else
                return {n.left, n.right};
        },
        *node_);
}

Expr Expr::with_children(const std::vector<Expr> &c) const
{
    return std::visit(
        [&](auto &n) -> Expr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, BaseRel>) {
                return *this;
            } else if constexpr (requires { n.child; }) {
                if (c.size() != 1) throw InvalidArgument("unary node needs one child");
                T copy = n;
                copy.child = c[0];
                return Expr(std::make_shared<const Node>(std::move(copy)));
            } else {
                if (c.size() != 2) throw InvalidArgument("binary node needs two children");
                T copy = n;
                copy.left = c[0];
                copy.right = c[1];
                return Expr(std::make_shared<const Node>(std::move(copy)));
            }
        },
        *node_);
}

bool operator==(const Expr &a, const Expr &b)
{
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    bool same = std::visit(
        [&](auto &x) -> bool {
            using T = std::decay_t<decltype(x)>;
            auto &y = std::get<T>(b.node());
            if constexpr (std::is_same_v<T, BaseRel>)
                return x.name == y.name;
            else if constexpr (std::is_same_v<T, Select> or std::is_same_v<T, Join>)
                return x.cond == y.cond;
            else if constexpr (std::is_same_v<T, Project>)
                return x.attrs == y.attrs;
            else if constexpr (std::is_same_v<T, RenameAttr>)
                return x.from == y.from and x.to == y.to;
            else if constexpr (std::is_same_v<T, RenamePrefix>)
                return x.prefix == y.prefix;
            else if constexpr (std::is_same_v<T, DirectlyFollows>)
                return x.case_attr == y.case_attr and x.time_attr == y.time_attr;
            else
                return true;
        },
        a.node());
    if (not same) return false;
    auto ca = a.children(), cb = b.children();
    for (std::size_t i = 0; i < ca.size(); ++i)
        if (not(ca[i] == cb[i])) return false;
    return true;
}

Expr subtree(const Expr &root, const NodePath &path)
{
    Expr cur = root;
    for (auto i : path) {
        auto ch = cur.children();
        if (i >= ch.size()) throw InvalidArgument("path " + to_string(path) + " leaves the tree");
        cur = ch[i];
    }
    return cur;
}

namespace {

Expr replace_from(const Expr &node, const NodePath &path, std::size_t depth, const Expr &replacement)
{
    if (depth == path.size()) return replacement;
    auto ch = node.children();
    if (path[depth] >= ch.size()) throw InvalidArgument("path " + to_string(path) + " leaves the tree");
    ch[path[depth]] = replace_from(ch[path[depth]], path, depth + 1, replacement);
    return node.with_children(ch);
}

} // namespace

Expr replace_subtree(const Expr &root, const NodePath &path, const Expr &replacement)
{
    return replace_from(root, path, 0, replacement);
}

std::size_t node_count(const Expr &e)
{
    std::size_t n = 1;
    for (auto &c : e.children()) n += node_count(c);
    return n;
}

bool contains_kind(const Expr &e, ExprKind k)
{
    if (e.kind() == k) return true;
    for (auto &c : e.children())
        if (contains_kind(c, k)) return true;
    return false;
}

Expr expand_df(const Expr &e, const std::vector<std::string> &child_attrs)
{
    auto *df = e.as<DirectlyFollows>();
    if (not df) throw InvalidArgument("expand_df applied to a " + std::string(to_string(e.kind())) + " node");
    const std::string &c = df->case_attr, &t = df->time_attr;
    auto down = [](const std::string &a) { return prefixed_name(kDownPrefix, a); };
    auto up = [](const std::string &a) { return prefixed_name(kUpPrefix, a); };

    const Expr &log = df->child;
    Expr pairs = Expr::join(Condition::conj(attr_cmp_attr(down(t), CompareOp::Lt, up(t)),
                                            attr_cmp_attr(down(c), CompareOp::Eq, up(c))),
                            Expr::prefix(std::string(kDownPrefix), log), Expr::prefix(std::string(kUpPrefix), log));
    Condition between = Condition::conj(Condition::conj(attr_cmp_attr(down(t), CompareOp::Lt, t),
                                                        attr_cmp_attr(t, CompareOp::Lt, up(t))),
                                        attr_cmp_attr(down(c), CompareOp::Eq, c));
    std::vector<std::string> as;
    as.reserve(2 * child_attrs.size());
    for (auto &a : child_attrs) as.push_back(down(a));
    for (auto &a : child_attrs) as.push_back(up(a));
    return Expr::minus(pairs, Expr::project(std::move(as), Expr::join(std::move(between), pairs, log)));
}

Expr desugar_join(const Expr &e)
{
    auto ch = e.children();
    for (auto &c : ch) c = desugar_join(c);
    if (auto *j = e.as<Join>()) return Expr::select(j->cond, Expr::product(ch[0], ch[1]));
    return ch.empty() ? e : e.with_children(ch);
}

} // namespace dfq
