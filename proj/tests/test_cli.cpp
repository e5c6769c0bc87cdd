#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "slt/cli.hpp"
#include "slt/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "slt");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = slt::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(SLT_TEST_DATA) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& contents) {
  const fs::path p = fs::temp_directory_path() / ("slt_test_" + name);
  std::ofstream(p) << contents;
  return p.string();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

}  // namespace

TEST_CASE("io: tree text parsing and canonical form") {
  const auto t = slt::parse_tree_text("6 2\n(()(()())())\n1 2 1 2 2 1\n");
  CHECK(t.size() == 6);
  CHECK(t.sigma == 2);
  CHECK(t.labels == fixture::kE1Labels);
  CHECK(slt::format_tree_text(t) == "6 2\n(()(()())())\n1 2 1 2 2 1\n");
  // Extra whitespace is tolerated but not reproduced.
  const auto loose = slt::parse_tree_text("6   2\r\n(()(()())())\n 1 2 1 2 2 1 \n");
  CHECK(slt::format_tree_text(loose) == slt::format_tree_text(t));
}

TEST_CASE("io: parse errors carry line numbers") {
  auto line_of = [](const std::string& text) -> std::uint64_t {
    try {
      slt::parse_tree_text(text);
    } catch (const slt::InputError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("6\n(()(()())())\n1 2 1 2 2 1\n") == 1);
  CHECK(line_of("x 2\n(()(()())())\n1 2 1 2 2 1\n") == 1);
  CHECK(line_of("6 2\n(()(()())()\n1 2 1 2 2 1\n") == 2);
  CHECK(line_of("6 2\n)(()(()())(\n1 2 1 2 2 1\n") == 2);
  CHECK(line_of("6 2\n(()(()())())\n1 2 1 2 2\n") == 3);
  CHECK(line_of("6 2\n(()(()())())\n1 2 1 2 2 3\n") == 3);
  CHECK(line_of("6 2\n(()(()())())\n") == 3);

  CHECK_THROWS_AS(slt::parse_query_line("parnt 1 2", 4), slt::InputError);
  CHECK_THROWS_AS(slt::parse_query_line("parent 1", 4), slt::InputError);
  CHECK_THROWS_AS(slt::parse_query_line("child_select 1 2", 4), slt::InputError);
  CHECK_THROWS_AS(slt::parse_query_line("depth 1 -3", 4), slt::InputError);
  const slt::Query q = slt::parse_query_line("level_ancestor 2 4 1");
  CHECK(q.kind == slt::QueryKind::level_ancestor);
  CHECK(slt::to_string(q) == "level_ancestor 2 4 1");
}

TEST_CASE("io: query files skip blanks and comments") {
  std::istringstream in("# header\n\nparent 1 4\n  \nlabel 2\n");
  const auto qs = slt::read_queries(in);
  REQUIRE(qs.size() == 2);
  CHECK(slt::format_answer(qs[0], 0) == "-");
  CHECK(slt::format_answer(qs[1], 0) == "0");
}

TEST_CASE("cli: fixture queries") {
  const Run r = cli({"query", data("e1.tree"), data("e1.queries")});
  CHECK(r.code == slt::kExitOk);
  CHECK(r.out == "3\n-\n2\n1\n1\n5\n");

  const Run csv = cli({"query", "--format", "csv", data("e1.tree"), data("e1.queries")});
  CHECK(csv.code == 0);
  CHECK(split(csv.out, '\n')[0] == "query,answer");
  CHECK(split(csv.out, '\n')[1] == "\"parent 1 4\",3");
}

TEST_CASE("cli: answers match the library and the oracle") {
  const slt::PlainTree t = slt::random_labeled_tree(60, 3, 12, slt::LabelSkew::zipf);
  slt::TreeText text{t.parens(), t.preorder_labels(), t.sigma};
  const std::string tree = temp_file("rand.tree", slt::format_tree_text(text));
  const auto qs = slt::sample_queries(t, 300, 5);
  std::string qtext;
  for (const auto& q : qs) qtext += slt::to_string(q) + "\n";
  const std::string queries = temp_file("rand.queries", qtext);

  slt::IndexConfig cfg;
  cfg.L = 2;
  const slt::LabeledTreeIndex idx(t, cfg);
  const Run r = cli({"query", "--L", "2", tree, queries});
  REQUIRE(r.code == 0);
  const auto lines = split(r.out, '\n');
  REQUIRE(lines.size() == qs.size());
  for (std::size_t k = 0; k < qs.size(); ++k) {
    CHECK(lines[k] == slt::format_answer(qs[k], idx.answer(qs[k])));
    CHECK(lines[k] == slt::format_answer(qs[k], slt::oracle_query(t, qs[k])));
  }
}

TEST_CASE("cli: save and load give the same answers") {
  const std::string saved = (fs::temp_directory_path() / "slt_test_e1.slt").string();
  CHECK(cli({"build", data("e1.tree"), "--L", "1", "--save", saved}).code == 0);
  const Run r = cli({"query", "--load", saved, data("e1.queries")});
  CHECK(r.code == 0);
  CHECK(r.out == "3\n-\n2\n1\n1\n5\n");
  CHECK(cli({"query", "--load", saved, data("e1.tree"), data("e1.queries")}).code == slt::kExitUsage);
}

TEST_CASE("cli: dump reproduces the canonical input") {
  std::ifstream in(data("e1.tree"));
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(cli({"dump", data("e1.tree")}).out == text);
  const std::string saved = (fs::temp_directory_path() / "slt_test_dump.slt").string();
  CHECK(cli({"build", data("e1.tree"), "--save", saved}).code == 0);
  CHECK(cli({"dump", "--load", saved}).out == text);
}

TEST_CASE("cli: usage and parse errors exit with 2") {
  CHECK(cli({}).code == slt::kExitUsage);
  CHECK(cli({"frobnicate"}).code == slt::kExitUsage);
  CHECK(cli({"query", data("e1.tree")}).code == slt::kExitUsage);
  CHECK(cli({"build", data("e1.tree"), "--format", "xml"}).code == slt::kExitUsage);

  const Run bad_tree = cli({"dump", temp_file("bad.tree", "6 2\n(()(()())()\n1 2 1 2 2 1\n")});
  CHECK(bad_tree.code == slt::kExitUsage);
  CHECK(bad_tree.err.find("line 2") != std::string::npos);

  const Run bad_query = cli({"query", data("e1.tree"), temp_file("bad.queries", "deg 2 3\nparnt 1 4\n")});
  CHECK(bad_query.code == slt::kExitUsage);
  CHECK(bad_query.err.find("line 2") != std::string::npos);
  CHECK(bad_query.out.empty());

  const Run range = cli({"query", data("e1.tree"), temp_file("range.queries", "parent 1 9\n")});
  CHECK(range.code == slt::kExitUsage);
  CHECK(range.err.find("line 1") != std::string::npos);
  CHECK(cli({"--help"}).code == slt::kExitOk);
}

TEST_CASE("cli: space report") {
  const Run r = cli({"space", "--format", "csv", data("e1.tree")});
  CHECK(r.code == 0);
  const auto lines = split(r.out, '\n');
  REQUIRE(lines.size() == 2);
  CHECK(split(lines[0], ',').size() == split(lines[1], ',').size());
}

TEST_CASE("cli: selftest exit codes and determinism") {
  const std::vector<std::string> small{"selftest", "--max-n", "4", "--instances", "6", "--samples", "200",
                                       "--max-log2", "15", "--criterion", "1", "--criterion", "2",
                                       "--criterion", "3", "--criterion", "5", "--criterion", "7"};
  const Run a = cli(small);
  CHECK(a.code == slt::kExitOk);
  CHECK(a.out.find("FAIL") == std::string::npos);
  const Run b = cli(small);
  CHECK(a.out == b.out);

  auto faulty = small;
  faulty.push_back("--inject-fault");
  const Run f = cli(faulty);
  CHECK(f.code == slt::kExitTestFailure);
  CHECK(f.out.find("repro") != std::string::npos);
  CHECK(f.out.find("seed=") != std::string::npos);
}

TEST_CASE("cli: bench CSV") {
  const Run r = cli({"bench", "--min-log2", "8", "--max-log2", "10", "--sigma", "1", "--sigma", "16",
                     "--samples", "50"});
  REQUIRE(r.code == 0);
  const auto lines = split(r.out, '\n');
  REQUIRE(lines.size() == 7);
  const auto header = split(lines[0], ',');
  CHECK(header == slt::bench_header());
  CHECK(header.size() == 7 + 12);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto cols = split(lines[k], ',');
    REQUIRE(cols.size() == header.size());
    for (const auto& c : cols) CHECK_NOTHROW((void)std::stod(c));
    if (cols[1] == "1") {
      const double n = std::stod(cols[0]);
      CHECK(std::stod(cols[3]) == 0.0);
      CHECK(std::stod(cols[5]) == doctest::Approx(std::stod(cols[4]) - 2 * n));
    }
  }
}

TEST_CASE("cli: redundancy per node does not grow past 2^14") {
  std::ostringstream out;
  slt::BenchOptions o;
  o.min_log2 = 14;
  o.max_log2 = 16;
  o.sigmas = {16};
  o.samples = 10;
  slt::run_bench(o, out);
  const auto lines = split(out.str(), '\n');
  REQUIRE(lines.size() == 4);
  double prev = 1e300;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const double rpn = std::stod(split(lines[k], ',')[6]);
    CHECK(rpn <= prev);
    prev = rpn;
  }
}
