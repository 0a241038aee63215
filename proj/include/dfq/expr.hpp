#pragma once

#include "dfq/condition.hpp"
#include "dfq/errors.hpp"

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace dfq {

class Expr;

struct BaseRel;
struct Select;
struct Project;
struct RenameAttr;
struct RenamePrefix;
struct Product;
struct Join;
struct Union;
struct Intersect;
struct Minus;
struct DirectlyFollows;

enum class ExprKind : std::uint8_t {
    BaseRel,
    Select,
    Project,
    RenameAttr,
    RenamePrefix,
    Product,
    Join,
    Union,
    Intersect,
    Minus,
    DirectlyFollows,
};

std::string_view to_string(ExprKind k);

/** Immutable relational-algebra expression tree.  Subtrees are shared, so copying an `Expr` is O(1) and rewriting a
 * node reuses every untouched subtree. */
class Expr
{
  public:
    using Node = std::variant<BaseRel, Select, Project, RenameAttr, RenamePrefix, Product, Join, Union, Intersect,
                              Minus, DirectlyFollows>;

  private:
    std::shared_ptr<const Node> node_;
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) { }

  public:
    static Expr base(std::string name);
    static Expr select(Condition cond, Expr child);
    static Expr project(std::vector<std::string> attrs, Expr child);
    static Expr rename(std::string from, std::string to, Expr child);
    static Expr prefix(std::string prefix, Expr child);
    static Expr product(Expr left, Expr right);
    static Expr join(Condition cond, Expr left, Expr right);
    static Expr union_of(Expr left, Expr right);
    static Expr intersect(Expr left, Expr right);
    static Expr minus(Expr left, Expr right);
    static Expr df(std::string case_attr, std::string time_attr, Expr child);

    const Node &node() const;
    ExprKind kind() const;
    template<typename T>
    const T *as() const;
    template<typename T>
    bool is() const;
    /// Address of the shared node; equal for copies of the same subtree.
    const void *identity() const { return node_.get(); }

    std::vector<Expr> children() const;
    /// This node with its children replaced (same arity required).
    Expr with_children(const std::vector<Expr> &children) const;

    /// Structural equality (conditions and attribute lists compared by value).
    friend bool operator==(const Expr &a, const Expr &b);
};

struct BaseRel
{
    std::string name;
};

struct Select
{
    Condition cond;
    Expr child;
};

struct Project
{
    std::vector<std::string> attrs;
    Expr child;
};

/// Renames attribute `from` to `to`.
struct RenameAttr
{
    std::string from, to;
    Expr child;
};

/// Prefixes every attribute name of the child with `prefix` + ".".
struct RenamePrefix
{
    std::string prefix;
    Expr child;
};

struct Product
{
    Expr left, right;
};

struct Join
{
    Condition cond;
    Expr left, right;
};

struct Union
{
    Expr left, right;
};

struct Intersect
{
    Expr left, right;
};

struct Minus
{
    Expr left, right;
};

/// Pairs of events of the same case (`case_attr`) that follow each other directly in `time_attr` order.
struct DirectlyFollows
{
    std::string case_attr, time_attr;
    Expr child;
};

inline const Expr::Node &Expr::node() const { return *node_; }
inline ExprKind Expr::kind() const { return ExprKind(node_->index()); }

template<typename T>
const T *Expr::as() const
{
    return std::get_if<T>(node_.get());
}

template<typename T>
bool Expr::is() const
{
    return std::holds_alternative<T>(*node_);
}

/// Subtree at `path`; throws `InvalidArgument` if the path leaves the tree.
Expr subtree(const Expr &root, const NodePath &path);
/// `root` with the subtree at `path` replaced by `replacement`.
Expr replace_subtree(const Expr &root, const NodePath &path, const Expr &replacement);
std::size_t node_count(const Expr &e);
bool contains_kind(const Expr &e, ExprKind k);

/** Composite form of a directly-follows node:
 *
 *     J1 - project(As, join(d.t < t & t < u.t & d.c = c, J1, L))
 *     J1 = join(d.t < u.t & d.c = u.c, prefix(d, L), prefix(u, L))
 *
 * where As lists the `d.` and then the `u.` attributes.  `J1` is a single shared subtree.  The attribute list needs
 * the child schema, hence `child_attrs`.  Throws `InvalidArgument` if `e` is not a directly-follows node. */
Expr expand_df(const Expr &e, const std::vector<std::string> &child_attrs);

/// Replaces every join by a selection over a product.
Expr desugar_join(const Expr &e);

} // namespace dfq
