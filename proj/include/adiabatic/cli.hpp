#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace adiabatic::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

/// Parses argv, runs one subcommand and writes its CSV to `out` (or --output).
/// Diagnostics go to `err`. Returns 0, 1 (bad input) or 2 (numerical failure).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Grid syntax shared by all sweeps: "start..end:count" or a comma list. "inf" is accepted.
std::vector<double> parse_real_grid(const std::string& text, int default_count);
/// Integer lists: "start..end:count" (rounded, deduplicated), "start..end" (10 points) or a comma list.
std::vector<int> parse_int_list(const std::string& text);

/// %.17g, with "inf", "-inf" and "nan" spelled out.
std::string format_number(double x);

}  // namespace adiabatic::cli
