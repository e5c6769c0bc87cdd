// Acceptance run: one PASS/FAIL line per criterion, budgets enforced.
#include <CLI11.hpp>

#include <iostream>

#include "slt/suite.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  slt::SuiteOptions opt;
  opt.enforce_budgets = true;
  std::vector<int> criteria;
  bool verbose = false;
  app.add_option("--criterion", criteria, "Run only these criteria")->check(CLI::Range(1, slt::kCriteria));
  app.add_option("--seed", opt.seed, "Suite seed");
  app.add_flag("-v,--verbose", verbose, "Progress on stderr");
  CLI11_PARSE(app, argc, argv);
  if (verbose) opt.log = &std::cerr;
  if (criteria.empty())
    for (int id = 1; id <= slt::kCriteria; ++id) criteria.push_back(id);

  int failed = 0;
  for (int id : criteria) {
    const slt::CriterionResult r = slt::run_criterion(id, opt);
    std::cout << slt::format_result(r) << std::endl;
    failed += r.pass ? 0 : 1;
  }
  return failed ? 1 : 0;
}
