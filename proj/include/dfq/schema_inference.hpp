#pragma once

#include "dfq/catalog.hpp"
#include "dfq/expr.hpp"
#include "dfq/relation.hpp"

namespace dfq {

/** Output schema of `e`.  Throws `SchemaError` located at the offending node:
 *  - UnknownAttribute: a condition, projection, rename or df names a missing attribute;
 *  - DuplicateAttribute: product/join operands share a name, or a rename/projection creates a repeat;
 *  - SchemaMismatch: set-operation operands differ;
 *  - TypeMismatch: a comparison mixes domains.
 * Throws `MissingRelationError` for unknown base relations. */
Schema infer_schema(const Expr &e, const Catalog &cat);

/// Type-checks `cond` against `schema` (node location reported as `at`).
void check_condition(const Condition &cond, const Schema &schema, const NodePath &at = {});

/// `expand_df` with the child attribute list taken from the inferred child schema.
Expr expand_df(const Expr &e, const Catalog &cat);

} // namespace dfq
