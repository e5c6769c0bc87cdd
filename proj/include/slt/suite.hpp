#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "slt/labeled_index.hpp"
#include "slt/oracle.hpp"

namespace slt {

/// Tally of oracle comparisons; keeps the first failure verbatim.
struct CheckReport {
  std::uint64_t checks = 0;
  std::uint64_t failures = 0;
  std::string first_failure;

  bool ok() const { return failures == 0; }
  void expect(bool good, const std::function<std::string()>& describe) {
    ++checks;
    if (good) return;
    if (failures++ == 0) first_failure = describe();
  }
  void merge(const CheckReport& o) {
    checks += o.checks;
    if (o.failures && failures == 0) first_failure = o.first_failure;
    failures += o.failures;
  }
};

// Linear-scan equivalence of one random instance per call.
CheckReport check_bitvector(std::uint64_t n, double density, std::uint64_t seed);
CheckReport check_sequence(std::uint64_t n, std::uint32_t sigma, std::uint64_t seed);
CheckReport check_bp_tree(std::uint64_t n, std::uint32_t block, std::uint64_t seed);
/// `all_directories` gives every step function a permanent directory;
/// otherwise phi queries run on temporary ones.
CheckReport check_weighted_tree(std::uint64_t n, std::uint32_t s, std::uint32_t X, std::uint32_t block,
                                bool all_directories, std::uint64_t seed);

/// Every ordered tree with n nodes, as parenthesis strings in lexicographic order.
std::vector<std::vector<bool>> all_trees(std::uint64_t n);

/// Copy of a serialized index with bit 0 of the first stored label flipped.
std::vector<std::uint8_t> flip_label_bit(std::vector<std::uint8_t> bytes);

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::uint64_t exhaustive_max_n = 8;  // criterion 1 sweep bound
  std::uint32_t exhaustive_block = 8;  // small blocks put block boundaries inside tiny trees
  std::uint64_t random_instances = 200;
  std::uint64_t samples = 1000;        // queries per random instance
  std::uint64_t space_max_log2 = 18;   // criterion 4 sweep 2^14 .. 2^max
  bool inject_fault = false;           // query a corrupted copy of every index
  bool enforce_budgets = false;        // a criterion over its time budget fails
  std::ostream* log = nullptr;         // progress lines
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string summary;  // one line of measurements
  std::string repro;    // first failure, empty when passing
  double seconds = 0.0;
  double budget = 0.0;  // seconds; 0 = unbounded
};

/// One random-suite instance; deterministic in (seed, k).
struct RandomInstance {
  PlainTree tree;
  std::uint32_t L = 0;  // 0 = default policy
  std::uint64_t seed = 0;  // generator seed of the tree
  std::uint64_t suite_seed = 0;
  std::uint64_t index = 0;
  LabelSkew skew = LabelSkew::uniform;
  std::string describe() const;
};
RandomInstance random_instance(std::uint64_t seed, std::uint64_t k);

CriterionResult run_criterion(int id, const SuiteOptions& opt);
inline constexpr int kCriteria = 7;

/// "PASS|FAIL <id> <name>: <summary>" plus a repro line on failure. With
/// `timing` the elapsed seconds and budget follow the name.
std::string format_result(const CriterionResult& r, bool timing = true);

}  // namespace slt
