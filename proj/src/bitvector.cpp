#include "slt/bitvector.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace slt {

namespace {

unsigned select_in_word(std::uint64_t w, std::uint64_t r) {  // r-th set bit, 1-based
  for (std::uint64_t k = 1; k < r; ++k) w &= w - 1;
  return static_cast<unsigned>(std::countr_zero(w));
}

std::vector<std::uint64_t> pack(const std::vector<bool>& bits) {
  std::vector<std::uint64_t> words((bits.size() + 63) / 64, 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) words[i >> 6] |= std::uint64_t{1} << (i & 63);
  return words;
}

}  // namespace

// ---------------------------------------------------------------------------
// PlainBitVector

PlainBitVector::PlainBitVector(const std::vector<bool>& bits) : words_(pack(bits)), size_(bits.size()) {
  index();
}

PlainBitVector::PlainBitVector(std::vector<std::uint64_t> words, std::uint64_t size)
    : words_(std::move(words)), size_(size) {
  words_.resize((size_ + 63) / 64);
  if (size_ & 63) words_.back() &= (std::uint64_t{1} << (size_ & 63)) - 1;
  index();
}

void PlainBitVector::index() {
  words_.push_back(0);  // sentinel so rank(size) never reads past the end
  const std::uint64_t per_super = kSuper / 64;
  super_.assign(size_ / kSuper + 2, 0);
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (w % per_super == 0) super_[w / per_super] = acc;
    acc += static_cast<std::uint64_t>(std::popcount(words_[w]));
  }
  for (std::size_t s = (words_.size() + per_super - 1) / per_super; s < super_.size(); ++s) super_[s] = acc;
  ones_ = acc;
}

std::uint64_t PlainBitVector::rank1(std::uint64_t i) const {
  const std::uint64_t sb = i / kSuper;
  std::uint64_t r = super_[sb];
  const std::uint64_t last = i >> 6;
  for (std::uint64_t w = sb * (kSuper / 64); w < last; ++w) r += std::popcount(words_[w]);
  if (i & 63) r += std::popcount(words_[last] & ((std::uint64_t{1} << (i & 63)) - 1));
  return r;
}

std::uint64_t PlainBitVector::select1(std::uint64_t j) const {
  std::size_t lo = 0, hi = super_.size() - 1;  // largest sb with super_[sb] < j
  while (lo < hi) {
    const std::size_t mid = (lo + hi + 1) / 2;
    if (super_[mid] < j) lo = mid; else hi = mid - 1;
  }
  std::uint64_t count = super_[lo];
  for (std::size_t w = lo * (kSuper / 64);; ++w) {
    const auto c = static_cast<std::uint64_t>(std::popcount(words_[w]));
    if (count + c >= j) return w * 64 + select_in_word(words_[w], j - count) + 1;
    count += c;
  }
}

std::uint64_t PlainBitVector::select0(std::uint64_t j) const {
  auto zeros_before = [&](std::size_t sb) { return sb * kSuper - super_[sb]; };
  std::size_t lo = 0, hi = super_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi + 1) / 2;
    if (mid * kSuper <= size_ && zeros_before(mid) < j) lo = mid; else hi = mid - 1;
  }
  std::uint64_t count = zeros_before(lo);
  for (std::size_t w = lo * (kSuper / 64);; ++w) {
    const auto c = static_cast<std::uint64_t>(std::popcount(~words_[w]));
    if (count + c >= j) return w * 64 + select_in_word(~words_[w], j - count) + 1;
    count += c;
  }
}

std::uint64_t PlainBitVector::size_in_bits() const {
  return 64 * static_cast<std::uint64_t>(words_.size() + super_.size()) + 128;
}

// ---------------------------------------------------------------------------
// EliasFanoBitVector

EliasFanoBitVector::EliasFanoBitVector(const std::vector<bool>& bits) : size_(bits.size()) {
  std::vector<std::uint64_t> pos;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) pos.push_back(i);
  ones_ = pos.size();
  if (ones_ > 0 && size_ > ones_) low_width_ = static_cast<unsigned>(std::bit_width(size_ / ones_) - 1);
  low_ = IntVector(ones_, low_width_ == 0 ? 1 : low_width_);
  std::vector<bool> high((size_ >> low_width_) + ones_ + 1, false);
  for (std::size_t j = 0; j < pos.size(); ++j) {
    if (low_width_ > 0) low_.set(j, pos[j] & ((std::uint64_t{1} << low_width_) - 1));
    high[(pos[j] >> low_width_) + j] = true;
  }
  high_ = PlainBitVector(high);
}

std::uint64_t EliasFanoBitVector::select1(std::uint64_t j) const {
  const std::uint64_t hi = high_.select1(j) - 1 - (j - 1);
  const std::uint64_t lo = low_width_ > 0 ? low_.get(j - 1) : 0;
  return ((hi << low_width_) | lo) + 1;
}

std::uint64_t EliasFanoBitVector::rank1(std::uint64_t i) const {
  std::uint64_t lo = 0, hi = ones_;  // largest j with select1(j) <= i
  while (lo < hi) {
    const std::uint64_t mid = (lo + hi + 1) / 2;
    if (select1(mid) <= i) lo = mid; else hi = mid - 1;
  }
  return lo;
}

std::uint64_t EliasFanoBitVector::select0(std::uint64_t j) const {
  std::uint64_t lo = 1, hi = size_;  // smallest i with rank0(i) >= j
  while (lo < hi) {
    const std::uint64_t mid = (lo + hi) / 2;
    if (mid - rank1(mid) >= j) hi = mid; else lo = mid + 1;
  }
  return lo;
}

std::uint64_t EliasFanoBitVector::size_in_bits() const {
  return (low_width_ > 0 ? low_.size_in_bits() : 0) + high_.size_in_bits() + 192;
}

// ---------------------------------------------------------------------------
// BitVector

BitVector::BitVector(const std::vector<bool>& bits) : size_(bits.size()) {
  for (bool b : bits) ones_ += b;
  sparse_ = size_ > 0 && ones_ * 8 < size_;
  if (sparse_) ef_ = EliasFanoBitVector(bits);
  else plain_ = PlainBitVector(bits);
}

BitVector::BitVector(std::string_view bits01) : BitVector([&] {
  std::vector<bool> v;
  v.reserve(bits01.size());
  for (char c : bits01) {
    if (c != '0' && c != '1') throw std::invalid_argument("BitVector: expected '0' or '1'");
    v.push_back(c == '1');
  }
  return v;
}()) {}

std::uint64_t BitVector::rank(bool b, std::uint64_t i) const {
  if (i > size_) throw std::out_of_range("bit_rank: position " + std::to_string(i) + " out of range");
  const std::uint64_t r1 = sparse_ ? ef_.rank1(i) : plain_.rank1(i);
  return b ? r1 : i - r1;
}

std::uint64_t BitVector::select(bool b, std::uint64_t j) const {
  if (j == 0 || j > count(b)) throw std::out_of_range("bit_select: no such occurrence");
  if (sparse_) return b ? ef_.select1(j) : ef_.select0(j);
  return b ? plain_.select1(j) : plain_.select0(j);
}

bool BitVector::access(std::uint64_t i) const {
  if (i == 0 || i > size_) throw std::out_of_range("bit_access: position " + std::to_string(i) + " out of range");
  return sparse_ ? ef_.access(i) : plain_.access(i);
}

std::uint64_t BitVector::size_in_bits() const {
  return 128 + (sparse_ ? ef_.size_in_bits() : plain_.size_in_bits());
}

std::vector<bool> BitVector::to_bits() const {
  std::vector<bool> out(size_);
  if (sparse_) {
    for (std::uint64_t j = 1; j <= ones_; ++j) out[ef_.select1(j) - 1] = true;
  } else {
    for (std::uint64_t i = 1; i <= size_; ++i) out[i - 1] = plain_.access(i);
  }
  return out;
}

void BitVector::save(ByteWriter& out) const {
  const auto words = pack(to_bits());
  out.u64(size_);
  for (auto w : words) out.u64(w);
}

BitVector BitVector::load(ByteReader& in) {
  const std::uint64_t n = in.u64();
  if (n / 64 > in.remaining()) throw std::runtime_error("bit vector length exceeds input");
  std::vector<bool> bits(n);
  for (std::uint64_t w = 0; w < (n + 63) / 64; ++w) {
    const std::uint64_t word = in.u64();
    for (std::uint64_t k = 0; k < 64 && w * 64 + k < n; ++k) bits[w * 64 + k] = (word >> k) & 1u;
  }
  return BitVector(bits);
}

}  // namespace slt
