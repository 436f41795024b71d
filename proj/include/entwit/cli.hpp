#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

namespace entwit::cli {

inline constexpr const char *kVersion = "0.1.0";

/// Settings shared by every subcommand.
struct RunConfig {
  std::uint64_t seed = 1;
  int restarts = 64;
  unsigned threads = 0;
  std::map<std::string, double> tolerances; // membership, tight, certify, dedup
};

/// %.12g with a trailing ".0" when the result would read as an integer.
std::string format_number(double value);

/// Entry point: 0 on success, 1 on a domain error, 2 on a usage error.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace entwit::cli
