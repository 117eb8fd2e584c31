#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace gtensor::verify {

struct VerifyOptions {
  unsigned threads = 1;
  std::string omega_table_path;  // empty: the shipped table
  std::size_t sweep_grid = 1000;
  std::uint64_t seed = 20240611;
};

struct CheckResult {
  int id = 0;  // acceptance criterion number, 0 for auxiliary checks
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
  double limit_seconds = 0;
};

struct CriterionInfo {
  int id;
  std::string slug;
  std::string title;
  double limit_seconds;
};
const std::vector<CriterionInfo>& criteria();

CheckResult run_criterion(int id, const VerifyOptions& options);
std::string format_line(const CheckResult& r);

struct SuiteResult {
  std::string suite;
  std::vector<CheckResult> checks;
  std::size_t passed() const;
  bool pass() const { return passed() == checks.size(); }
};
// "all", "lemma-decomp", "length-rule", or a criterion slug / number.
std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name, const VerifyOptions& options, std::ostream* progress = nullptr);

// Graph-sum identity on random fixtures; one check per fixture.
std::vector<CheckResult> graph_sum_fixtures(std::uint64_t seed, std::size_t count);
std::vector<CheckResult> length_rule_fixtures(std::uint64_t seed, std::size_t count);

std::string shipped_omega_table_path();

struct AcceptanceOutcome {
  std::set<int> failed;
  std::set<int> expected;
  bool ok() const { return failed == expected; }
};
AcceptanceOutcome run_acceptance(std::ostream& out, const VerifyOptions& options, const std::set<int>& expected_fail);

}  // namespace gtensor::verify
