#pragma once

#include <iosfwd>

namespace dfq::cli {

/// Exit codes of the `dfq` tool.
enum ExitCode : int {
    kOk = 0,
    kParseError = 1,   ///< query text does not parse
    kSchemaError = 2,  ///< schema, type or evaluation error
    kMissing = 3,      ///< unknown relation, missing statistics or missing declarations
    kViolations = 4,   ///< `validate` found class violations
    kUsage = 5,        ///< bad flags or parameters, unreadable input files
};

/// Environment variable naming the default catalog path.
inline constexpr const char *kCatalogEnv = "DFQ_CATALOG";

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace dfq::cli
