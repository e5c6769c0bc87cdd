#include "slt/sequence.hpp"

#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>

namespace slt {

LabeledSequence::LabeledSequence(std::span<const std::uint32_t> chars, std::uint32_t sigma)
    : size_(chars.size()), sigma_(sigma), counts_(sigma + 1, 0), leaf_(sigma + 1, -1),
      code_(sigma + 1, 0), code_len_(sigma + 1, 0) {
  if (sigma == 0) throw std::invalid_argument("sequence: alphabet size must be >= 1");
  for (std::size_t i = 0; i < chars.size(); ++i) {
    if (chars[i] < 1 || chars[i] > sigma)
      throw std::invalid_argument("sequence: symbol " + std::to_string(chars[i]) + " at position " +
                                  std::to_string(i + 1) + " outside [1," + std::to_string(sigma) + "]");
    ++counts_[chars[i]];
  }
  if (size_ == 0) return;

  // Huffman merge over present symbols. Ties broken by id for determinism.
  struct Tmp {
    std::int32_t child[2] = {-1, -1};
    std::uint32_t symbol = 0;
  };
  std::vector<Tmp> tmp;
  using Item = std::pair<std::uint64_t, std::int32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (std::uint32_t c = 1; c <= sigma; ++c) {
    if (counts_[c] == 0) continue;
    Tmp t;
    t.symbol = c;
    tmp.push_back(t);
    heap.emplace(counts_[c], static_cast<std::int32_t>(tmp.size() - 1));
  }
  while (heap.size() > 1) {
    auto [ca, a] = heap.top();
    heap.pop();
    auto [cb, b] = heap.top();
    heap.pop();
    Tmp t;
    t.child[0] = a;
    t.child[1] = b;
    tmp.push_back(t);
    heap.emplace(ca + cb, static_cast<std::int32_t>(tmp.size() - 1));
  }

  // Re-layout in preorder with the root at index 0; fill codes.
  std::function<std::int32_t(std::int32_t, std::int32_t, bool, std::uint64_t, std::uint8_t)> lay =
      [&](std::int32_t t, std::int32_t parent, bool which, std::uint64_t code, std::uint8_t len) {
        const auto id = static_cast<std::int32_t>(nodes_.size());
        nodes_.emplace_back();
        nodes_[id].parent = parent;
        nodes_[id].which = which;
        if (tmp[t].child[0] < 0) {
          nodes_[id].symbol = tmp[t].symbol;
          leaf_[tmp[t].symbol] = id;
          code_[tmp[t].symbol] = code;
          code_len_[tmp[t].symbol] = len;
          return id;
        }
        if (len >= 63) throw std::length_error("sequence: code length overflow");
        const auto c0 = lay(tmp[t].child[0], id, false, code, len + 1);
        const auto c1 = lay(tmp[t].child[1], id, true, code | (std::uint64_t{1} << len), len + 1);
        nodes_[id].child[0] = c0;
        nodes_[id].child[1] = c1;
        return id;
      };
  lay(heap.top().second, -1, false, 0, 0);

  std::function<void(std::int32_t, std::vector<std::uint32_t>, unsigned)> fill =
      [&](std::int32_t id, std::vector<std::uint32_t> seq, unsigned level) {
        Node& nd = nodes_[id];
        if (nd.child[0] < 0) return;
        std::vector<bool> bits(seq.size());
        std::vector<std::uint32_t> part[2];
        for (std::size_t i = 0; i < seq.size(); ++i) {
          const bool b = (code_[seq[i]] >> level) & 1u;
          bits[i] = b;
          part[b].push_back(seq[i]);
        }
        seq.clear();
        seq.shrink_to_fit();
        nd.bits = BitVector(bits);
        const auto c0 = nd.child[0], c1 = nd.child[1];
        fill(c0, std::move(part[0]), level + 1);
        fill(c1, std::move(part[1]), level + 1);
      };
  fill(0, std::vector<std::uint32_t>(chars.begin(), chars.end()), 0);
}

void LabeledSequence::check_symbol(std::uint32_t c) const {
  if (c < 1 || c > sigma_)
    throw std::out_of_range("sequence: symbol " + std::to_string(c) + " outside alphabet");
}

std::uint32_t LabeledSequence::access(std::uint64_t i) const {
  if (i == 0 || i > size_) throw std::out_of_range("seq_access: position " + std::to_string(i) + " out of range");
  std::int32_t id = 0;
  while (nodes_[id].child[0] >= 0) {
    const bool b = nodes_[id].bits.access(i);
    i = nodes_[id].bits.rank(b, i);
    id = nodes_[id].child[b];
  }
  return nodes_[id].symbol;
}

std::uint64_t LabeledSequence::rank(std::uint32_t c, std::uint64_t i) const {
  check_symbol(c);
  if (i > size_) throw std::out_of_range("seq_rank: position " + std::to_string(i) + " out of range");
  if (counts_[c] == 0) return 0;
  std::int32_t id = 0;
  for (unsigned level = 0; level < code_len_[c] && i > 0; ++level) {
    const bool b = (code_[c] >> level) & 1u;
    i = nodes_[id].bits.rank(b, i);
    id = nodes_[id].child[b];
  }
  return i;
}

std::uint64_t LabeledSequence::select(std::uint32_t c, std::uint64_t j) const {
  check_symbol(c);
  if (j == 0 || j > counts_[c]) throw std::out_of_range("seq_select: no such occurrence");
  for (std::int32_t id = leaf_[c]; nodes_[id].parent >= 0; id = nodes_[id].parent)
    j = nodes_[nodes_[id].parent].bits.select(nodes_[id].which, j);
  return j;
}

double LabeledSequence::entropy() const {
  if (size_ == 0) return 0.0;
  double h = 0.0;
  const double n = static_cast<double>(size_);
  for (std::uint32_t c = 1; c <= sigma_; ++c)
    if (counts_[c] > 0) {
      const double p = static_cast<double>(counts_[c]) / n;
      h -= p * std::log2(p);
    }
  return h;
}

std::uint64_t LabeledSequence::size_in_bits() const {
  std::uint64_t bits = 128;
  std::uint32_t present = 0;
  for (const Node& nd : nodes_)
    if (nd.child[0] >= 0) bits += nd.bits.size_in_bits();
  for (std::uint32_t c = 1; c <= sigma_; ++c) present += counts_[c] > 0;
  // Code table: one (symbol, code, length) entry per present symbol.
  bits += static_cast<std::uint64_t>(present) * (bits_for(sigma_) + 64 + 8);
  return bits;
}

std::vector<std::uint32_t> LabeledSequence::to_vector() const {
  std::vector<std::uint32_t> out(size_);
  for (std::uint64_t i = 1; i <= size_; ++i) out[i - 1] = access(i);
  return out;
}

}  // namespace slt
