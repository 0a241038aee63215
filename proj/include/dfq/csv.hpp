#pragma once

#include "dfq/catalog.hpp"
#include "dfq/relation.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dfq {

struct CsvOptions
{
    char delimiter = ',';
    /// Column types that bypass inference.
    std::map<std::string, Domain> types;
    std::optional<std::string> case_attr;
    std::optional<std::string> time_attr;
};

struct LoadedRelation
{
    Relation relation;
    RelationMeta meta;
    std::size_t duplicates_dropped = 0;
    std::vector<std::string> warnings;
};

/// Splits RFC-4180 text into records.  Quoted fields may hold delimiters, doubled quotes and line breaks.
std::vector<std::vector<std::string>> parse_csv_records(std::string_view text, char delimiter = ',');

/** Parses a CSV document with a header row.  Column types are inferred (integer, decimal, timestamp, text) unless
 * overridden; empty cells become absent; duplicate rows are dropped with a warning.  Throws `CsvError` on ragged rows
 * or a cell that does not parse under an explicit type. */
LoadedRelation parse_csv(std::string_view text, const CsvOptions &options = {});
LoadedRelation load_csv(const std::filesystem::path &path, const CsvOptions &options = {});

/** A relation declaration read from a `.meta` sidecar:
 *
 *     name=Log
 *     csv=log.csv
 *     case_attr=case
 *     time_attr=end_time
 *     class.amount=case
 *     type.amount=decimal
 *     totality=join(a = b, R, S)
 *     stats.N=10000
 *     stats.V=500
 *
 * `#` starts a comment line; `totality` may repeat. */
struct Sidecar
{
    std::string name;
    std::filesystem::path csv;
    CsvOptions options;
    RelationMeta meta;
};

Sidecar parse_sidecar(std::string_view text, const std::filesystem::path &base_dir = {});

/** Adds the relations found at `path` to `cat`: a `.meta` sidecar, a bare `.csv` (named after its stem), or a
 * directory holding either (a CSV claimed by a sidecar is not loaded twice).  Warnings are appended to `warnings`. */
void load_catalog_path(Catalog &cat, const std::filesystem::path &path, std::vector<std::string> *warnings = nullptr);

} // namespace dfq
