#include "gtensor/verify/verify.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <thread>

// One PASS/FAIL line per acceptance criterion. Exits 0 when exactly the expected criteria fail.
int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  gtensor::verify::VerifyOptions options;
  options.threads = std::max(1u, std::thread::hardware_concurrency());
  std::set<int> expected_fail = {6};
  app.add_option("--threads", options.threads)->check(CLI::PositiveNumber);
  app.add_option("--expect-fail", expected_fail, "Criteria known to fail");
  CLI11_PARSE(app, argc, argv);
  auto outcome = gtensor::verify::run_acceptance(std::cout, options, expected_fail);
  return outcome.ok() ? 0 : 1;
}
