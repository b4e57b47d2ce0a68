#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>

namespace fibgap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;

/// Parses argv, runs one subcommand and returns the process exit code.
/// Results go to `out` unless an output path is given; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// FNV-1a 64-bit hash, recorded in output headers to tie results to a config.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

} // namespace fibgap::cli
