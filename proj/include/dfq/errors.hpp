#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dfq {

/// Base class of every error raised by the engine.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Position of a node in an expression tree: child indices from the root.
using NodePath = std::vector<std::size_t>;

/// Renders a path as `/`, `/0`, `/1/0`, ...
std::string to_string(const NodePath &path);

enum class SchemaErrorKind { UnknownAttribute, DuplicateAttribute, SchemaMismatch, TypeMismatch };

std::string to_string(SchemaErrorKind kind);

/// An ill-formed expression. `location()` names the node at fault.
class SchemaError : public Error
{
    SchemaErrorKind kind_;
    NodePath location_;
    std::string detail_;

  public:
    SchemaError(SchemaErrorKind kind, std::string detail, NodePath location = {});

    SchemaErrorKind kind() const { return kind_; }
    const NodePath &location() const { return location_; }
    const std::string &detail() const { return detail_; }
    /// Copy of this error located at `prefix` + `location()`.
    SchemaError relocated(const NodePath &prefix) const;
};

/// Comparison between values of different concrete domains.
class TypeError : public Error
{
  public:
    using Error::Error;
};

/// A relation named in a query (or a statistic needed to price it) is not in the catalog.
class MissingRelationError : public Error
{
  public:
    using Error::Error;
};

class MissingStatsError : public Error
{
  public:
    using Error::Error;
};

/// Runtime failure while executing a plan, e.g. an absent timestamp under the native operator.
class EvalError : public Error
{
  public:
    using Error::Error;
};

class CsvError : public Error
{
  public:
    using Error::Error;
};

class InvalidArgument : public Error
{
  public:
    using Error::Error;
};

} // namespace dfq
