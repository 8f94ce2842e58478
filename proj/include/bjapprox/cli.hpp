#pragma once

// Command-line front end: `bjapprox dist|check|bench`. Problems and results
// are JSON documents with "schema": 1; see README.md for the fields.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace bjapprox::cli {

enum ExitCode : int { kOk = 0, kVerdictFalse = 1, kUsage = 2, kDisagreement = 3 };

/// Route disagreement above this makes `dist` and `bench` exit with kDisagreement.
inline constexpr double kDisagreementThreshold = 1e-5;

struct GlobalOptions {
  double tolerance = 1e-9;
  unsigned long long seed = 42;
  int restarts = 8;
  std::vector<std::string> routes;  // empty: every applicable route
  bool tolerance_set = false;
  bool seed_set = false;
};

/// Solves one problem document for `command` ("dist" or "check") and returns
/// the result document together with its exit code. Malformed input yields an
/// error document and kUsage.
struct Outcome {
  nlohmann::json document;
  int exit_code = kOk;
};
Outcome solve(const std::string& command, const nlohmann::json& problem, const GlobalOptions& options);

/// Reads a file holding one problem or an array of problems; arrays are
/// solved concurrently and reported in input order.
Outcome solve_file(const std::string& command, const std::string& path, const GlobalOptions& options);

struct BenchSpec {
  std::vector<int> sizes{2, 3, 4, 6};
  std::vector<double> exponents{1.5, 2.0, 3.0};
  int trials = 5;
  bool timing = true;
};
Outcome bench(const BenchSpec& spec, const GlobalOptions& options);

/// Structural check of a result document against the documented schema;
/// returns an empty string when valid, else the first problem found.
std::string validate_result(const nlohmann::json& document);

/// Entry point used by main; writes results to out and diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bjapprox::cli
