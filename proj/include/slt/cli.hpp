#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "slt/labeled_index.hpp"

namespace slt {

/// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitTestFailure = 1;
inline constexpr int kExitUsage = 2;

struct BenchOptions {
  std::uint64_t seed = 1;
  std::uint64_t samples = 2000;  // timed queries per query type
  std::uint32_t L = 0;
  std::uint32_t block_size = 512;
  std::uint64_t min_log2 = 10;
  std::uint64_t max_log2 = 16;
  std::vector<std::uint32_t> sigmas{1, 2, 16, 256};
  LabelSkew skew = LabelSkew::uniform;
};

/// Column names of the bench CSV, in order.
std::vector<std::string> bench_header();
/// One CSV row per (sigma, n) of the doubling sweep, header first.
void run_bench(const BenchOptions& opt, std::ostream& out);

/// Entry point of the `slt` tool. Every message goes to `out` or `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace slt
