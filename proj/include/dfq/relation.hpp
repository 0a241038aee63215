#pragma once

#include "dfq/value.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dfq {

/// Prefixes produced by the directly-follows operator for the earlier (`d.`) and later (`u.`) event of a pair.
inline constexpr std::string_view kDownPrefix = "d";
inline constexpr std::string_view kUpPrefix = "u";

/// `prefix` + "." + `name`
std::string prefixed_name(std::string_view prefix, std::string_view name);
/// True if `name` starts with one of the reserved pair prefixes.
bool has_reserved_prefix(std::string_view name);

struct Attribute
{
    std::string name;
    Domain domain;

    friend bool operator==(const Attribute &, const Attribute &) = default;
    friend auto operator<=>(const Attribute &, const Attribute &) = default;
};

/** An ordered list of uniquely named attributes.  The order only fixes the physical column layout; two schemas are
 * equal iff they hold the same set of (name, domain) pairs. */
class Schema
{
    std::vector<Attribute> attrs_;

  public:
    Schema() = default;
    /// Throws `SchemaError` (DuplicateAttribute) on repeated names.
    explicit Schema(std::vector<Attribute> attrs);

    std::size_t size() const { return attrs_.size(); }
    bool empty() const { return attrs_.empty(); }
    const Attribute &operator[](std::size_t i) const { return attrs_[i]; }
    auto begin() const { return attrs_.begin(); }
    auto end() const { return attrs_.end(); }
    const std::vector<Attribute> &attributes() const { return attrs_; }

    std::optional<std::size_t> find(std::string_view name) const;
    bool contains(std::string_view name) const { return find(name).has_value(); }
    /// Throws `SchemaError` (UnknownAttribute).
    std::size_t index_of(std::string_view name) const;
    std::vector<std::string> names() const;

    Schema prefixed(std::string_view prefix) const;
    Schema concat(const Schema &other) const;
    Schema restricted(const std::vector<std::string> &names) const;
    Schema renamed(std::string_view from, std::string_view to) const;

    /// Set equality of (name, domain) pairs.
    friend bool operator==(const Schema &a, const Schema &b);
};

std::string to_string(const Schema &s);

using Row = std::span<const Value>;

bool row_less(Row a, Row b);
bool row_equal(Row a, Row b);

/// Tuples as given by callers: total maps from attribute name to value.
using Tuple = std::map<std::string, Value, std::less<>>;

/** A schema together with a set of rows.  Rows are stored flat, sorted by the structural value order and free of
 * duplicates, so a `Relation` is always in set form.  Relations are immutable; every modifier returns a new one. */
class Relation
{
    Schema schema_;
    std::vector<Value> cells_;
    std::size_t rows_ = 0;

    struct SortedTag { };
    Relation(Schema schema, std::vector<Value> cells, std::size_t rows, SortedTag);

  public:
    Relation() = default;
    explicit Relation(Schema schema) : schema_(std::move(schema)) { }

    /** Builds a relation from row-major `cells` (length a multiple of the arity).  Sorts and removes duplicate rows;
     * `dropped` receives the number of duplicates removed.  Throws `SchemaError` (TypeMismatch) if a present value
     * does not belong to its column's domain. */
    static Relation from_cells(Schema schema, std::vector<Value> cells, std::size_t *dropped = nullptr);
    static Relation from_rows(Schema schema, const std::vector<std::vector<Value>> &rows, std::size_t *dropped = nullptr);
    /// Caller guarantees `cells` is already sorted and duplicate free (kernels that produce ordered output).
    static Relation from_sorted_cells(Schema schema, std::vector<Value> cells);

    const Schema &schema() const { return schema_; }
    std::size_t size() const { return rows_; }
    bool empty() const { return rows_ == 0; }
    std::size_t arity() const { return schema_.size(); }
    Row row(std::size_t i) const { return Row(cells_.data() + i * arity(), arity()); }
    const std::vector<Value> &cells() const { return cells_; }

    bool contains(Row r) const;
    Tuple tuple(std::size_t i) const;

    /// Returns a relation that additionally holds `t`; a no-op if `t` is present.  Throws `SchemaError` if `t` is not
    /// total over the schema or has extra keys.
    Relation insert(const Tuple &t) const;

    /// The same relation with its columns permuted into the order of `target` (which must be set-equal).
    Relation aligned_to(const Schema &target) const;
};

Relation insert_tuple(const Relation &r, const Tuple &t);

/// Schemas equal as sets and identical row sets (after column alignment).
bool relation_equal(const Relation &a, const Relation &b);

} // namespace dfq
