#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace nwidth::harness {

struct CheckResult {
  std::string suite;
  std::string check;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  /// Constant added to every level projection; nonzero values must make the
  /// projector checks fail.
  double projector_fault = 0.0;
};

const std::vector<std::string>& suite_names();

/// Runs one suite, or every suite for "all". Throws ConfigError for unknown
/// names.
std::vector<CheckResult> run_suite(const std::string& name, const VerifyOptions& options = {});

/// One JSON object per line plus a summary object; returns true when every
/// check passed.
bool write_verify_report(std::ostream& out, const std::vector<CheckResult>& results);

}  // namespace nwidth::harness
