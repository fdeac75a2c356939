#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace hypjac::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 2;
inline constexpr int exit_numerical = 3;

inline constexpr int schema_version = 1;

/// Runs the command line `args` (without the program name). The machine
/// readable document goes to `out` (or --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// JSON text with every floating point value printed to 17 significant digits
/// and non-finite values as null. Object keys keep insertion order.
std::string dump_json(const nlohmann::ordered_json& doc);

/// %.17g, or an empty field for non-finite values.
std::string format_number(double v);

}  // namespace hypjac::cli
