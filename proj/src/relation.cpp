#include "dfq/relation.hpp"

#include "dfq/errors.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace dfq {

std::string to_string(const NodePath &path)
{
    if (path.empty()) return "/";
    std::string out;
    for (auto i : path) out += "/" + std::to_string(i);
    return out;
}

std::string to_string(SchemaErrorKind kind)
{
    switch (kind) {
        case SchemaErrorKind::UnknownAttribute: return "UnknownAttribute";
        case SchemaErrorKind::DuplicateAttribute: return "DuplicateAttribute";
        case SchemaErrorKind::SchemaMismatch: return "SchemaMismatch";
        case SchemaErrorKind::TypeMismatch: return "TypeMismatch";
    }
    return "?";
}

SchemaError::SchemaError(SchemaErrorKind kind, std::string detail, NodePath location)
    : Error(to_string(kind) + " at " + to_string(location) + ": " + detail)
    , kind_(kind)
    , location_(std::move(location))
    , detail_(std::move(detail))
{ }

SchemaError SchemaError::relocated(const NodePath &prefix) const
{
    NodePath full = prefix;
    full.insert(full.end(), location_.begin(), location_.end());
    return SchemaError(kind_, detail_, std::move(full));
}

std::string prefixed_name(std::string_view prefix, std::string_view name)
{
    std::string out;
    out.reserve(prefix.size() + 1 + name.size());
    out.append(prefix).append(".").append(name);
    return out;
}

bool has_reserved_prefix(std::string_view name)
{
    return name.starts_with("d.") or name.starts_with("u.");
}

Schema::Schema(std::vector<Attribute> attrs) : attrs_(std::move(attrs))
{
    std::unordered_set<std::string_view> seen;
    for (auto &a : attrs_) {
        if (a.name.empty()) throw SchemaError(SchemaErrorKind::UnknownAttribute, "empty attribute name");
        if (not seen.insert(a.name).second)
            throw SchemaError(SchemaErrorKind::DuplicateAttribute, "attribute '" + a.name + "' occurs twice");
    }
}

std::optional<std::size_t> Schema::find(std::string_view name) const
{
    for (std::size_t i = 0; i < attrs_.size(); ++i)
        if (attrs_[i].name == name) return i;
    return std::nullopt;
}

std::size_t Schema::index_of(std::string_view name) const
{
    if (auto i = find(name)) return *i;
    throw SchemaError(SchemaErrorKind::UnknownAttribute,
                      "no attribute '" + std::string(name) + "' in " + to_string(*this));
}

std::vector<std::string> Schema::names() const
{
    std::vector<std::string> out;
    out.reserve(attrs_.size());
    for (auto &a : attrs_) out.push_back(a.name);
    return out;
}

Schema Schema::prefixed(std::string_view prefix) const
{
    std::vector<Attribute> out;
    out.reserve(attrs_.size());
    for (auto &a : attrs_) out.push_back({prefixed_name(prefix, a.name), a.domain});
    return Schema(std::move(out));
}

Schema Schema::concat(const Schema &other) const
{
    std::vector<Attribute> out = attrs_;
    out.insert(out.end(), other.attrs_.begin(), other.attrs_.end());
    return Schema(std::move(out));
}

Schema Schema::restricted(const std::vector<std::string> &names) const
{
    std::vector<Attribute> out;
    out.reserve(names.size());
    for (auto &n : names) out.push_back(attrs_[index_of(n)]);
    return Schema(std::move(out));
}

Schema Schema::renamed(std::string_view from, std::string_view to) const
{
    auto i = index_of(from);
    std::vector<Attribute> out = attrs_;
    out[i].name = std::string(to);
    return Schema(std::move(out));
}

bool operator==(const Schema &a, const Schema &b)
{
    if (a.size() != b.size()) return false;
    for (auto &attr : a.attrs_) {
        auto j = b.find(attr.name);
        if (not j or b.attrs_[*j].domain != attr.domain) return false;
    }
    return true;
}

std::string to_string(const Schema &s)
{
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ", ";
        out += s[i].name + ":" + std::string(to_string(s[i].domain));
    }
    return out + "}";
}

bool row_less(Row a, Row b)
{
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool row_equal(Row a, Row b)
{
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

Relation::Relation(Schema schema, std::vector<Value> cells, std::size_t rows, SortedTag)
    : schema_(std::move(schema))
    , cells_(std::move(cells))
    , rows_(rows)
{ }

namespace {

void check_domains(const Schema &schema, const std::vector<Value> &cells)
{
    const std::size_t k = schema.size();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        auto &v = cells[i];
        if (not v.is_absent() and *v.domain() != schema[i % k].domain)
            throw SchemaError(SchemaErrorKind::TypeMismatch,
                              "value '" + to_display(v) + "' is not a " +
                                  std::string(to_string(schema[i % k].domain)) + " (attribute '" +
                                  schema[i % k].name + "')");
    }
}

} // namespace

Relation Relation::from_cells(Schema schema, std::vector<Value> cells, std::size_t *dropped)
{
    const std::size_t k = schema.size();
    if (k == 0) {
        if (dropped) *dropped = 0;
        return Relation(std::move(schema));
    }
    if (cells.size() % k != 0) throw InvalidArgument("cell count is not a multiple of the arity");
    check_domains(schema, cells);
    const std::size_t n = cells.size() / k;
    auto row_at = [&](std::size_t i) { return Row(cells.data() + i * k, k); };

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return row_less(row_at(a), row_at(b)); });

    std::vector<Value> out;
    out.reserve(cells.size());
    std::size_t rows = 0;
    for (std::size_t idx = 0; idx < n; ++idx) {
        Row r = row_at(order[idx]);
        if (rows and row_equal(r, Row(out.data() + (rows - 1) * k, k))) continue;
        out.insert(out.end(), r.begin(), r.end());
        ++rows;
    }
    if (dropped) *dropped = n - rows;
    return Relation(std::move(schema), std::move(out), rows, SortedTag{});
}

Relation Relation::from_rows(Schema schema, const std::vector<std::vector<Value>> &rows, std::size_t *dropped)
{
    std::vector<Value> cells;
    cells.reserve(rows.size() * schema.size());
    for (auto &r : rows) {
        if (r.size() != schema.size()) throw InvalidArgument("row arity does not match schema");
        cells.insert(cells.end(), r.begin(), r.end());
    }
    return from_cells(std::move(schema), std::move(cells), dropped);
}

Relation Relation::from_sorted_cells(Schema schema, std::vector<Value> cells)
{
    const std::size_t k = schema.size();
    const std::size_t rows = k ? cells.size() / k : 0;
    return Relation(std::move(schema), std::move(cells), rows, SortedTag{});
}

bool Relation::contains(Row r) const
{
    std::size_t lo = 0, hi = rows_;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (row_less(row(mid), r))
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo < rows_ and row_equal(row(lo), r);
}

Tuple Relation::tuple(std::size_t i) const
{
    Tuple t;
    auto r = row(i);
    for (std::size_t j = 0; j < arity(); ++j) t.emplace(schema_[j].name, r[j]);
    return t;
}

Relation Relation::insert(const Tuple &t) const
{
    if (t.size() != arity())
        throw SchemaError(SchemaErrorKind::SchemaMismatch, "tuple has " + std::to_string(t.size()) +
                                                               " attributes, schema has " + std::to_string(arity()));
    std::vector<Value> cells = cells_;
    for (auto &attr : schema_) {
        auto it = t.find(attr.name);
        if (it == t.end())
            throw SchemaError(SchemaErrorKind::SchemaMismatch, "tuple lacks attribute '" + attr.name + "'");
        cells.push_back(it->second);
    }
    return from_cells(schema_, std::move(cells));
}

Relation insert_tuple(const Relation &r, const Tuple &t) { return r.insert(t); }

Relation Relation::aligned_to(const Schema &target) const
{
    if (not(schema_ == target))
        throw SchemaError(SchemaErrorKind::SchemaMismatch, to_string(schema_) + " vs " + to_string(target));
    std::vector<std::size_t> perm(target.size());
    bool identity = true;
    for (std::size_t i = 0; i < target.size(); ++i) {
        perm[i] = schema_.index_of(target[i].name);
        identity = identity and perm[i] == i;
    }
    if (identity) return *this;
    std::vector<Value> cells;
    cells.reserve(cells_.size());
    for (std::size_t r = 0; r < rows_; ++r)
        for (auto p : perm) cells.push_back(cells_[r * arity() + p]);
    return from_cells(target, std::move(cells));
}

bool relation_equal(const Relation &a, const Relation &b)
{
    if (not(a.schema() == b.schema()) or a.size() != b.size()) return false;
    Relation bb = b.aligned_to(a.schema());
    return bb.cells() == a.cells();
}

} // namespace dfq
