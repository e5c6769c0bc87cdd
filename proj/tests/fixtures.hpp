#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slt/oracle.hpp"

namespace fixture {

// Six nodes: 1 -> {2, 3, 6}, 3 -> {4, 5}.
inline const std::string kE1Parens = "(()(()())())";
inline const std::vector<std::uint32_t> kE1Labels{1, 2, 1, 2, 2, 1};

inline std::vector<bool> bits_of(const std::string& parens) {
  std::vector<bool> b;
  for (char c : parens) b.push_back(c == '(');
  return b;
}

inline slt::PlainTree e1() { return slt::plain_tree_from_parens(bits_of(kE1Parens), kE1Labels, 2); }

// Four nodes: 1 -> {2, 4}, 2 -> {3}; two weights bounded by 4.
inline const std::string kM1Parens = "((())())";
inline const std::vector<std::vector<std::uint32_t>> kM1Weights{{0, 2, 1, 3}, {1, 0, 1, 0}};

}  // namespace fixture
