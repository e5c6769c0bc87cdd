#include "slt/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include "slt/io.hpp"
#include "slt/suite.hpp"

namespace slt {

namespace {

struct Common {
  std::uint32_t L = 0;
  std::uint32_t block_size = 512;
  std::string format = "text";
  std::string save;
  std::string load;
};

IndexConfig config_of(const Common& c) {
  IndexConfig cfg;
  cfg.L = c.L;
  cfg.block_size = c.block_size;
  return cfg;
}

/// Builds from a tree file or loads an SLT1 container; exactly one source.
LabeledTreeIndex obtain(const Common& c, const std::string& input) {
  if (!c.load.empty() && !input.empty()) throw CLI::ValidationError("give either an input tree or --load, not both");
  if (c.load.empty() && input.empty()) throw CLI::ValidationError("an input tree or --load is required");
  LabeledTreeIndex idx;
  if (!c.load.empty()) {
    idx = LabeledTreeIndex::load(c.load);
  } else {
    const TreeText t = read_tree_file(input);
    idx = LabeledTreeIndex(t.parens, t.labels, t.sigma, config_of(c));
  }
  if (!c.save.empty()) idx.save(c.save);
  return idx;
}

// Keeps timed answers observable to the optimizer.
volatile std::uint64_t bench_sink = 0;

std::string csv_quote(const std::string& s) { return '"' + s + '"'; }

void print_space(const SpaceReport& s, const std::string& format, std::ostream& out) {
  if (format == "csv") {
    out << "n,sigma,L,h0,labels_bits,shape_bits,merged_bits,n_bits,f_bits,total_bits,redundancy_bits,"
           "redundancy_per_node\n";
    out << s.n << ',' << s.sigma << ',' << s.L << ',' << s.h0 << ',' << s.labels_bits << ',' << s.shape_bits << ','
        << s.merged_bits << ',' << s.n_bits << ',' << s.f_bits << ',' << s.total_bits << ',' << s.redundancy_bits
        << ',' << s.redundancy_per_node << '\n';
    return;
  }
  out << "n " << s.n << "\nsigma " << s.sigma << "\nL " << s.L << "\nh0 " << s.h0 << "\nlabels_bits "
      << s.labels_bits << "\nshape_bits " << s.shape_bits << "\nmerged_bits " << s.merged_bits << "\nmerged_nodes "
      << s.merged_nodes << "\nn_bits " << s.n_bits << "\nf_bits " << s.f_bits << "\ntotal_bits " << s.total_bits
      << "\nredundancy_bits " << s.redundancy_bits << "\nredundancy_per_node " << s.redundancy_per_node << '\n';
}

int run_queries(const LabeledTreeIndex& idx, const std::string& path, const std::string& format, std::ostream& out) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  // Answers are buffered so a bad line late in the file emits nothing.
  std::ostringstream buf;
  if (format == "csv") buf << "query,answer\n";
  std::string line;
  for (std::uint64_t line_no = 1; std::getline(in, line); ++line_no) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const Query q = parse_query_line(line, line_no);
    std::uint64_t a = 0;
    try {
      a = idx.answer(q);
    } catch (const std::out_of_range& e) {
      throw InputError(line_no, e.what());
    }
    if (format == "csv")
      buf << csv_quote(to_string(q)) << ',' << format_answer(q, a) << '\n';
    else
      buf << format_answer(q, a) << '\n';
  }
  out << buf.str();
  return kExitOk;
}

}  // namespace

std::vector<std::string> bench_header() {
  std::vector<std::string> h{"n", "sigma", "L", "h0", "total_bits", "redundancy_bits", "redundancy_per_node"};
  for (QueryKind k : kAllQueries) h.push_back("ns_" + std::string(query_name(k)));
  return h;
}

void run_bench(const BenchOptions& opt, std::ostream& out) {
  const auto header = bench_header();
  for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
  out << '\n';
  for (std::uint32_t sigma : opt.sigmas) {
    for (std::uint64_t lg = opt.min_log2; lg <= opt.max_log2; ++lg) {
      const std::uint64_t n = std::uint64_t{1} << lg;
      const std::uint64_t seed = opt.seed * 1000003 + sigma * 64 + lg;
      const PlainTree t = random_labeled_tree(n, sigma, seed, opt.skew);
      IndexConfig cfg;
      cfg.L = opt.L;
      cfg.block_size = opt.block_size;
      const LabeledTreeIndex idx(t, cfg);
      const SpaceReport s = idx.space_report();
      out << s.n << ',' << s.sigma << ',' << s.L << ',' << s.h0 << ',' << s.total_bits << ',' << s.redundancy_bits
          << ',' << s.redundancy_per_node;
      // Sample until every query type has its quota.
      std::vector<std::vector<Query>> by_kind(std::size(kAllQueries));
      std::uint64_t round = 0;
      auto short_of = [&] {
        for (const auto& v : by_kind)
          if (v.size() < opt.samples) return true;
        return false;
      };
      while (short_of() && round < 64) {
        for (const Query& q : sample_queries(t, opt.samples * std::size(kAllQueries), seed + ++round)) {
          auto& v = by_kind[static_cast<std::size_t>(q.kind)];
          if (v.size() < opt.samples) v.push_back(q);
        }
      }
      for (const auto& qs : by_kind) {
        std::uint64_t sink = 0;
        const auto start = std::chrono::steady_clock::now();
        for (const Query& q : qs) sink += idx.answer(q);
        const double ns =
            std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - start).count();
        bench_sink = sink;
        out << ',' << (qs.empty() ? 0.0 : ns / static_cast<double>(qs.size()));
      }
      out << '\n' << std::flush;
    }
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Succinct labeled ordered tree index"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "slt 1.0");

  Common c;
  auto add_build_flags = [&](CLI::App* s) {
    s->add_option("--L", c.L, "Decomposition parameter (0 = default)");
    s->add_option("--block-size", c.block_size, "Directory block size")->check(CLI::Range(2u, 1u << 20));
  };
  auto add_format = [&](CLI::App* s) {
    s->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "csv"}));
  };

  std::string input;

  auto* build = app.add_subcommand("build", "Build an index and report its space");
  build->add_option("input", input, "Tree text file")->check(CLI::ExistingFile);
  add_build_flags(build);
  add_format(build);
  build->add_option("--save", c.save, "Write the SLT1 container");

  auto* query = app.add_subcommand("query", "Answer a query file, one answer per line");
  std::vector<std::string> query_files;
  query->add_option("files", query_files, "[TREE] QUERIES")->expected(1, 2)->check(CLI::ExistingFile);
  add_build_flags(query);
  add_format(query);
  query->add_option("--save", c.save, "Write the SLT1 container");
  query->add_option("--load", c.load, "Read an SLT1 container instead of a tree")->check(CLI::ExistingFile);

  auto* space = app.add_subcommand("space", "Report the space breakdown of an index");
  space->add_option("input", input, "Tree text file")->check(CLI::ExistingFile);
  add_build_flags(space);
  add_format(space);
  space->add_option("--load", c.load, "Read an SLT1 container")->check(CLI::ExistingFile);

  auto* dump_cmd = app.add_subcommand("dump", "Print the canonical tree text of an index");
  dump_cmd->add_option("input", input, "Tree text file")->check(CLI::ExistingFile);
  dump_cmd->add_option("--load", c.load, "Read an SLT1 container")->check(CLI::ExistingFile);

  SuiteOptions so;
  bool full = false, timing = false, verbose = false;
  std::vector<int> criteria;
  auto* selftest = app.add_subcommand("selftest", "Run the acceptance suites against the oracle");
  selftest->add_option("--seed", so.seed, "Suite seed");
  selftest->add_option("--samples", so.samples, "Sampled queries per random instance");
  selftest->add_option("--instances", so.random_instances, "Random instances");
  selftest->add_option("--max-n", so.exhaustive_max_n, "Largest tree of the exhaustive sweep")
      ->check(CLI::Range(1, 10));
  selftest->add_option("--max-log2", so.space_max_log2, "Largest n of the space sweep is 2^this")
      ->check(CLI::Range(15, 24));
  selftest->add_option("--criterion", criteria, "Run only these criteria")->check(CLI::Range(1, kCriteria));
  selftest->add_flag("--full", full, "Exhaustive sweep up to n = 8");
  selftest->add_flag("--inject-fault", so.inject_fault, "Query corrupted indexes; must fail");
  selftest->add_flag("--enforce-budgets", so.enforce_budgets, "Fail criteria over their time budget");
  selftest->add_flag("--timing", timing, "Print elapsed seconds (report is then not reproducible)");
  selftest->add_flag("-v,--verbose", verbose, "Progress on stderr");
  so.exhaustive_max_n = 6;
  so.space_max_log2 = 18;

  BenchOptions bo;
  std::string skew = "uniform";
  auto* bench = app.add_subcommand("bench", "Space and query-time sweep as CSV");
  bench->add_option("--seed", bo.seed, "Generator seed");
  bench->add_option("--samples", bo.samples, "Timed queries per query type")->check(CLI::PositiveNumber);
  bench->add_option("--L", bo.L, "Decomposition parameter (0 = default)");
  bench->add_option("--block-size", bo.block_size, "Directory block size")->check(CLI::Range(2u, 1u << 20));
  bench->add_option("--min-log2", bo.min_log2, "Smallest n is 2^this")->check(CLI::Range(1, 26));
  bench->add_option("--max-log2", bo.max_log2, "Largest n is 2^this")->check(CLI::Range(1, 26));
  bench->add_option("--sigma", bo.sigmas, "Alphabet sizes")->check(CLI::PositiveNumber);
  bench->add_option("--skew", skew, "Label distribution")->check(CLI::IsMember({"uniform", "zipf"}));
  std::string bench_format = "csv";
  bench->add_option("--format", bench_format, "Only csv is produced")->check(CLI::IsMember({"csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*build || *space) {
      const LabeledTreeIndex idx = obtain(c, input);
      print_space(idx.space_report(), c.format, out);
      return kExitOk;
    }
    if (*dump_cmd) {
      out << dump(obtain(c, input));
      return kExitOk;
    }
    if (*query) {
      if (c.load.empty() != (query_files.size() == 2))
        throw CLI::ValidationError("usage: query TREE QUERIES | query --load INDEX QUERIES");
      const LabeledTreeIndex idx = obtain(c, query_files.size() == 2 ? query_files[0] : std::string());
      return run_queries(idx, query_files.back(), c.format, out);
    }
    if (*selftest) {
      if (full) so.exhaustive_max_n = 8;
      if (verbose) so.log = &err;
      if (criteria.empty())
        for (int id = 1; id <= kCriteria; ++id) criteria.push_back(id);
      int failed = 0;
      for (int id : criteria) {
        const CriterionResult r = run_criterion(id, so);
        out << format_result(r, timing) << '\n' << std::flush;
        failed += r.pass ? 0 : 1;
      }
      out << "selftest seed " << so.seed << ": " << (criteria.size() - failed) << '/' << criteria.size()
          << " criteria passed\n";
      return failed ? kExitTestFailure : kExitOk;
    }
    if (*bench) {
      if (bo.min_log2 > bo.max_log2) throw CLI::ValidationError("--min-log2 exceeds --max-log2");
      bo.skew = skew == "zipf" ? LabelSkew::zipf : LabelSkew::uniform;
      run_bench(bo, out);
      return kExitOk;
    }
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace slt
