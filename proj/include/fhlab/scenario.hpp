#pragma once

// Scenario runner behind the command-line tool. Every number in a report is a
// function of the configuration alone; wall-clock data goes to a separate
// metadata document.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fhlab/io.hpp"

namespace fhlab {

/// Bad flags, unknown scenario or model, unusable files. Maps to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  std::string scenario;  // axioms | extend | moyal-check | quantize | representation
  std::string model = "matrix";
  std::string family = "weyl-heisenberg:4";
  std::optional<std::size_t> dim;
  std::vector<std::size_t> ladder;
  std::uint64_t seed = 0;
  double tol = 1e-10;
  std::string out;
  std::vector<std::string> mutations;  // "key=value"
  std::optional<std::size_t> samples;
  std::string element;  // element file
};

const std::vector<std::string>& scenario_names();

struct Assertion {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
};

struct ScenarioResult {
  io::Json report;
  std::vector<Assertion> assertions;
  bool pass() const;
  int exit_code() const { return pass() ? 0 : 2; }
};

/// Runs one scenario. Throws UsageError or FormatError on bad input.
ScenarioResult run_scenario(const ScenarioConfig& config);

/// "weyl-heisenberg:<n>" | "random:<N>,<d>,<seed>" | "file:<path>".
OperatorFamily parse_family_spec(const std::string& spec);

/// Assertion table as CSV (fixed 17-digit formatting).
std::string assertions_csv(const ScenarioResult& result);

/// Writes <out>, the CSV next to it (extension replaced by .csv) and
/// <stem>.meta.json with `metadata`.
void write_outputs(const ScenarioResult& result, const std::string& out, const io::Json& metadata);

}  // namespace fhlab
