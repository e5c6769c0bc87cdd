#pragma once

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "slt/labeled_index.hpp"
#include "slt/oracle.hpp"

namespace slt {

/// Malformed text input; `line()` is 1-based.
class InputError : public std::invalid_argument {
 public:
  InputError(std::uint64_t line, const std::string& what)
      : std::invalid_argument("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::uint64_t line() const { return line_; }

 private:
  std::uint64_t line_;
};

/// Tree text format:
///   line 1: "n sigma"
///   line 2: 2n parentheses
///   line 3: n labels in preorder
struct TreeText {
  std::vector<bool> parens;
  std::vector<std::uint32_t> labels;
  std::uint32_t sigma = 0;

  std::uint64_t size() const { return labels.size(); }
};

TreeText parse_tree_text(std::istream& in);
TreeText parse_tree_text(std::string_view text);
TreeText read_tree_file(const std::string& path);

std::string format_tree_text(const TreeText& t);
/// Canonical text of an index; equals the input text for canonical input.
std::string dump(const LabeledTreeIndex& idx);

/// "<name> <alpha> <x|i> [i]", or "label <x>".
Query parse_query_line(std::string_view line, std::uint64_t line_no = 1);
/// One query per line; blank lines and lines starting with '#' are skipped.
std::vector<Query> read_queries(std::istream& in);

/// Node answers print 0 as "-".
std::string format_answer(const Query& q, std::uint64_t value);

}  // namespace slt
