#include "slt/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace slt {

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t k = 0;
  while (k < s.size()) {
    while (k < s.size() && (s[k] == ' ' || s[k] == '\t' || s[k] == '\r')) ++k;
    const std::size_t start = k;
    while (k < s.size() && s[k] != ' ' && s[k] != '\t' && s[k] != '\r') ++k;
    if (k > start) out.push_back(s.substr(start, k - start));
  }
  return out;
}

std::uint64_t parse_uint(std::string_view tok, std::uint64_t line, const char* what) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size())
    throw InputError(line, std::string("expected ") + what + ", got '" + std::string(tok) + "'");
  return v;
}

std::uint32_t parse_u32(std::string_view tok, std::uint64_t line, const char* what) {
  const std::uint64_t v = parse_uint(tok, line, what);
  if (v > UINT32_MAX) throw InputError(line, std::string(what) + " too large");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

TreeText parse_tree_text(std::istream& in) {
  std::string line;
  std::uint64_t line_no = 0;
  auto next = [&](const char* what) {
    if (!std::getline(in, line)) throw InputError(line_no + 1, std::string("missing ") + what);
    ++line_no;
  };

  next("header \"n sigma\"");
  const auto head = split_ws(line);
  if (head.size() != 2) throw InputError(line_no, "expected \"n sigma\"");
  const std::uint64_t n = parse_uint(head[0], line_no, "node count");
  TreeText t;
  t.sigma = parse_u32(head[1], line_no, "alphabet size");
  if (n == 0) throw InputError(line_no, "tree must have at least one node");
  if (t.sigma == 0) throw InputError(line_no, "alphabet size must be >= 1");

  next("parentheses");
  std::int64_t excess = 0;
  std::uint64_t pos = 0;
  for (char c : line) {
    if (c == ' ' || c == '\t' || c == '\r') continue;
    ++pos;
    if (c != '(' && c != ')') throw InputError(line_no, "unexpected character '" + std::string(1, c) + "'");
    excess += c == '(' ? 1 : -1;
    if (excess < 0 || (excess == 0 && pos != 2 * n))
      throw InputError(line_no, "unbalanced parentheses at position " + std::to_string(pos));
    t.parens.push_back(c == '(');
  }
  if (t.parens.size() != 2 * n)
    throw InputError(line_no, "expected " + std::to_string(2 * n) + " parentheses, got " +
                                  std::to_string(t.parens.size()));

  next("labels");
  const auto toks = split_ws(line);
  if (toks.size() != n)
    throw InputError(line_no, "expected " + std::to_string(n) + " labels, got " + std::to_string(toks.size()));
  for (auto tok : toks) {
    const std::uint32_t a = parse_u32(tok, line_no, "label");
    if (a == 0 || a > t.sigma)
      throw InputError(line_no, "label " + std::to_string(a) + " outside [1," + std::to_string(t.sigma) + "]");
    t.labels.push_back(a);
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!split_ws(line).empty()) throw InputError(line_no, "trailing content");
  }
  return t;
}

TreeText parse_tree_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_tree_text(in);
}

TreeText read_tree_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_tree_text(in);
}

std::string format_tree_text(const TreeText& t) {
  std::string out = std::to_string(t.size()) + ' ' + std::to_string(t.sigma) + '\n';
  for (bool b : t.parens) out += b ? '(' : ')';
  out += '\n';
  for (std::size_t k = 0; k < t.labels.size(); ++k) {
    if (k) out += ' ';
    out += std::to_string(t.labels[k]);
  }
  out += '\n';
  return out;
}

std::string dump(const LabeledTreeIndex& idx) {
  TreeText t;
  t.parens = idx.shape().parens();
  t.labels = idx.label_sequence().to_vector();
  t.sigma = idx.sigma();
  return format_tree_text(t);
}

Query parse_query_line(std::string_view line, std::uint64_t line_no) {
  const auto toks = split_ws(line);
  if (toks.empty()) throw InputError(line_no, "empty query");
  const auto kind = parse_query_kind(toks[0]);
  if (!kind) throw InputError(line_no, "unknown query '" + std::string(toks[0]) + "'");
  Query q;
  q.kind = *kind;
  if (q.kind == QueryKind::label) {
    if (toks.size() != 2) throw InputError(line_no, "usage: label <x>");
    q.x = parse_uint(toks[1], line_no, "node id");
    return q;
  }
  const std::size_t want = takes_index(q.kind) ? 4 : 3;
  if (toks.size() != want)
    throw InputError(line_no, "usage: " + std::string(toks[0]) + (want == 4 ? " <alpha> <x> <i>" : takes_node(q.kind) ? " <alpha> <x>" : " <alpha> <i>"));
  q.alpha = parse_u32(toks[1], line_no, "label");
  q.x = parse_uint(toks[2], line_no, takes_node(q.kind) ? "node id" : "index");
  if (want == 4) q.i = parse_uint(toks[3], line_no, "index");
  return q;
}

std::vector<Query> read_queries(std::istream& in) {
  std::vector<Query> out;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto toks = split_ws(line);
    if (toks.empty() || toks[0].front() == '#') continue;
    out.push_back(parse_query_line(line, line_no));
  }
  return out;
}

std::string format_answer(const Query& q, std::uint64_t value) {
  if (returns_node(q.kind) && value == kNone) return "-";
  return std::to_string(value);
}

}  // namespace slt
