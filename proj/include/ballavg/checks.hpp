#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ballavg::checks {

struct CheckOptions {
  int trials = 100;            ///< random fields for the lemma23 suite
  bool inject_fault = false;   ///< perturb Î while the suite runs
  std::uint64_t seed = 20240601;
};

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::vector<std::string> details;      ///< one line per assertion
  std::map<std::string, double> measured;

  /// Records one assertion; a false `ok` fails the suite.
  void expect(bool ok, const std::string& line);
  std::string to_text() const;
};

/// multipliers, oracle, calderon, se9, polynomial, lemma23, chains, hajlasz
const std::vector<std::string>& suite_names();

/// Throws DomainError for an unknown suite name.
SuiteResult run_suite(const std::string& name, const CheckOptions& options = {});

}  // namespace ballavg::checks
