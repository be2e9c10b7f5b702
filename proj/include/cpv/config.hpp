#pragma once

#include <cstdint>
#include <string>

#include "cpv/families.hpp"
#include "cpv/verifier.hpp"

namespace cpv {

// Run configuration: a flat key-value document with typed sections
// (family, params, sampling, tolerances, output). Every key has a default;
// command-line flags override file values.

struct RunConfig {
  FamilySpec spec;
  int n = 100;
  std::uint64_t seed = 7;
  Tolerances tol;
  std::string out_path;            // empty: stdout only
  std::string format = "text";     // text | json | csv

  bool operator==(const RunConfig&) const = default;
};

// Parses the configuration document; throws std::invalid_argument with a
// line-tagged message on malformed input.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Lossless re-serialization (parse(serialize(c)) == c).
std::string serialize_config(const RunConfig& cfg);

// helpers shared with the CLI
std::vector<double> parse_number_list(const std::string& text);   // "a,b,c"
std::vector<double> parse_range(const std::string& text);         // "a:b:n"
double parse_double(const std::string& text);

// CSV export, RFC-4180-style rows, '.' decimal separator, 17 significant
// digits (round-trip exact for 64-bit doubles)
std::string format_double(double x);
std::string curve_csv(const std::vector<std::array<double, 5>>& rows, bool with_scal,
                      const std::vector<double>& scal, const std::vector<double>& scal2 = {},
                      const std::string& scal2_name = "");

}  // namespace cpv
