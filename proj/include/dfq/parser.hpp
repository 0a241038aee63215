#pragma once

#include "dfq/condition.hpp"
#include "dfq/errors.hpp"
#include "dfq/expr.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace dfq {

/// Byte range `[start, end)` in the query text.
struct SourceSpan
{
    std::size_t start = 0;
    std::size_t end = 0;
};

class ParseError : public Error
{
    SourceSpan span_;
    std::vector<std::string> expected_;
    std::string found_;

  public:
    ParseError(SourceSpan span, std::vector<std::string> expected, std::string found);

    const SourceSpan &span() const { return span_; }
    const std::vector<std::string> &expected() const { return expected_; }
    const std::string &found() const { return found_; }
};

/** Parses the query language.
 *
 *     expr  := name "(" args ")" | ident
 *     select(cond, expr)       project(attr {, attr}, expr)    rename(attr -> attr, expr)
 *     prefix(ident, expr)      product(expr, expr)             join(cond, expr, expr)
 *     union(expr, expr)        intersect(expr, expr)           minus(expr, expr)
 *     df(attr, attr, expr)
 *     cond  := conj {"|" conj} ;  conj := unary {"&" unary} ;  unary := "!" unary | "(" cond ")" | atom op atom
 *     op    := ">" | ">=" | "=" | "!=" | "<=" | "<"
 *     atom  := attr | integer | decimal | 'text' | "text" | HH:MM[:SS[.fff]] | YYYY-MM-DD[THH:MM[:SS[.fff]][Z]]
 *     attr  := ident {"." ident}            (pair attributes are written d.x / u.x)
 *
 * Throws `ParseError` at the first error. */
Expr parse(std::string_view text);
Condition parse_condition(std::string_view text);

/// One-line rendering in the query language; `parse(render(e)) == e`.
std::string render(const Expr &e);

/// Multi-line rendering: one node per line, children indented by two spaces.
std::string render_tree(const Expr &e);

/// The line `render_tree` prints for the root of `e`.
std::string render_node(const Expr &e);

/// Caret diagnostic for `err` against the original query text.
std::string describe(const ParseError &err, std::string_view text);

} // namespace dfq
