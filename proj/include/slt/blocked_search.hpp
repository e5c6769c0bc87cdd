#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace slt {

/// Prefix-sum search directory over a step sequence f(1..m).
///
/// The sequence itself is not stored: every query takes a `fill` callback
/// `void(std::uint64_t first, std::uint64_t count, std::int64_t* out)` that
/// decodes f over a run of positions. The directory keeps, per block of B
/// positions, the prefix sum before the block plus a segment tree over block
/// minima (with multiplicity) and maxima of the absolute prefix sums. All
/// positions are 1-based; prefix(0) = 0.
class BlockedSearch {
 public:
  BlockedSearch() = default;

  template <class Fill>
  BlockedSearch(std::uint64_t m, std::uint32_t block, Fill&& fill) : m_(m), block_(block) {
    if (block == 0 || block > 65535) throw std::invalid_argument("block size must be in [1,65535]");
    nblocks_ = (m + block - 1) / block;
    leaves_ = 1;
    while (leaves_ < nblocks_) leaves_ <<= 1;
    base_.assign(nblocks_, 0);
    mn_.assign(2 * leaves_, kMax);
    mx_.assign(2 * leaves_, kMin);
    cnt_.assign(2 * leaves_, 0);
    Scratch buf(scratch());
    std::int64_t acc = 0;
    for (std::uint64_t b = 0; b < nblocks_; ++b) {
      base_[b] = acc;
      const std::uint64_t len = block_len(b);
      fill(b * block_ + 1, len, buf.data());
      std::int64_t lo = kMax, hi = kMin;
      std::uint32_t c = 0;
      for (std::uint64_t k = 0; k < len; ++k) {
        acc += buf[k];
        if (acc > kMax || acc < kMin + 1) throw std::overflow_error("prefix sum exceeds directory range");
        if (acc < lo) lo = acc, c = 0;
        if (acc == lo) ++c;
        hi = std::max(hi, acc);
      }
      mn_[leaves_ + b] = static_cast<std::int32_t>(lo);
      mx_[leaves_ + b] = static_cast<std::int32_t>(hi);
      cnt_[leaves_ + b] = static_cast<std::uint16_t>(c);
    }
    for (std::uint64_t v = leaves_ - 1; v >= 1; --v) pull(v);
    total_ = acc;
  }

  std::uint64_t length() const { return m_; }
  std::int64_t total() const { return total_; }

  template <class Fill>
  std::int64_t prefix(std::uint64_t k, Fill&& fill) const {
    if (k == 0) return 0;
    const std::uint64_t b = (k - 1) / block_;
    Scratch buf(scratch());
    const std::uint64_t len = k - b * block_;
    fill(b * block_ + 1, len, buf.data());
    std::int64_t acc = base_[b];
    for (std::uint64_t i = 0; i < len; ++i) acc += buf[i];
    return acc;
  }

  /// Smallest k >= lo with prefix(k) >= t, or 0.
  template <class Fill>
  std::uint64_t first_ge(std::uint64_t lo, std::int64_t t, Fill&& fill) const {
    return first_impl(lo, t, fill, [](std::int64_t v, std::int64_t x) { return v >= x; }, true);
  }
  /// Smallest k >= lo with prefix(k) <= t, or 0.
  template <class Fill>
  std::uint64_t first_le(std::uint64_t lo, std::int64_t t, Fill&& fill) const {
    return first_impl(lo, t, fill, [](std::int64_t v, std::int64_t x) { return v <= x; }, false);
  }
  /// Largest k in [0, hi] with prefix(k) <= t.
  template <class Fill>
  std::optional<std::uint64_t> last_le(std::uint64_t hi, std::int64_t t, Fill&& fill) const {
    return last_impl(hi, t, fill, [](std::int64_t v, std::int64_t x) { return v <= x; }, false);
  }
  /// Largest k in [0, hi] with prefix(k) >= t.
  template <class Fill>
  std::optional<std::uint64_t> last_ge(std::uint64_t hi, std::int64_t t, Fill&& fill) const {
    return last_impl(hi, t, fill, [](std::int64_t v, std::int64_t x) { return v >= x; }, true);
  }

  /// max / min of prefix(k) over k in [lo, hi], 1 <= lo <= hi <= m.
  template <class Fill>
  std::int64_t range_max(std::uint64_t lo, std::uint64_t hi, Fill&& fill) const {
    return range_extreme(lo, hi, fill, true);
  }
  template <class Fill>
  std::int64_t range_min(std::uint64_t lo, std::uint64_t hi, Fill&& fill) const {
    return range_extreme(lo, hi, fill, false);
  }

  /// Number of k in [lo, hi] with prefix(k) == t, where t is a lower bound of
  /// the prefix sums over the range.
  template <class Fill>
  std::uint64_t count_min(std::uint64_t lo, std::uint64_t hi, std::int64_t t, Fill&& fill) const {
    if (lo > hi) return 0;
    const std::uint64_t bl = (lo - 1) / block_, br = (hi - 1) / block_;
    Scratch buf(scratch());
    std::uint64_t c = 0;
    auto scan = [&](std::uint64_t b, std::uint64_t from, std::uint64_t to) {
      decode(b, fill, buf);
      for (std::uint64_t k = from; k <= to; ++k) c += buf[k - b * block_ - 1] == t;
    };
    if (bl == br) {
      scan(bl, lo, hi);
      return c;
    }
    scan(bl, lo, (bl + 1) * block_);
    if (bl + 1 <= br - 1) {
      auto [m, k] = query_min(bl + 1, br - 1);
      if (m == t) c += k;
    }
    scan(br, br * block_ + 1, hi);
    return c;
  }

  /// Position of the i-th k in [lo, hi] with prefix(k) == t (t a lower bound
  /// over the range), or 0.
  template <class Fill>
  std::uint64_t select_min(std::uint64_t lo, std::uint64_t hi, std::int64_t t, std::uint64_t i,
                           Fill&& fill) const {
    if (lo > hi || i == 0) return 0;
    const std::uint64_t bl = (lo - 1) / block_, br = (hi - 1) / block_;
    Scratch buf(scratch());
    auto scan = [&](std::uint64_t b, std::uint64_t from, std::uint64_t to) -> std::uint64_t {
      decode(b, fill, buf);
      for (std::uint64_t k = from; k <= to; ++k)
        if (buf[k - b * block_ - 1] == t && --i == 0) return k;
      return 0;
    };
    if (bl == br) return scan(bl, lo, hi);
    if (auto k = scan(bl, lo, (bl + 1) * block_)) return k;
    if (bl + 1 <= br - 1) {
      const std::int64_t b = kth_min_block(1, 0, leaves_ - 1, bl + 1, br - 1, t, i);
      if (b >= 0) return scan(static_cast<std::uint64_t>(b), b * block_ + 1, (b + 1) * block_);
    }
    return scan(br, br * block_ + 1, hi);
  }

  std::uint64_t size_in_bits() const {
    return 64 * base_.size() + (32 + 32 + 16) * mn_.size() + 256;
  }

 private:
  // Decode buffer; blocks up to kInline positions stay off the heap.
  class Scratch {
   public:
    explicit Scratch(std::uint64_t n) {
      if (n > kInline) heap_.resize(n);
    }
    std::int64_t* data() { return heap_.empty() ? inline_.data() : heap_.data(); }
    std::int64_t& operator[](std::uint64_t i) { return data()[i]; }

   private:
    static constexpr std::uint64_t kInline = 512;
    std::array<std::int64_t, kInline> inline_;
    std::vector<std::int64_t> heap_;
  };

  static constexpr std::int64_t kMax = std::numeric_limits<std::int32_t>::max();
  static constexpr std::int64_t kMin = std::numeric_limits<std::int32_t>::min();

  std::uint64_t scratch() const { return std::min<std::uint64_t>(block_, m_ == 0 ? 1 : m_); }
  std::uint64_t block_len(std::uint64_t b) const { return std::min<std::uint64_t>(block_, m_ - b * block_); }

  template <class Fill>
  void decode(std::uint64_t b, Fill& fill, Scratch& buf) const {
    const std::uint64_t len = block_len(b);
    fill(b * block_ + 1, len, buf.data());
    std::int64_t acc = base_[b];
    for (std::uint64_t k = 0; k < len; ++k) buf[k] = acc += buf[k];
  }

  void pull(std::uint64_t v) {
    const auto l = 2 * v, r = 2 * v + 1;
    mn_[v] = std::min(mn_[l], mn_[r]);
    mx_[v] = std::max(mx_[l], mx_[r]);
    cnt_[v] = 0;
    std::uint32_t c = 0;
    if (mn_[l] == mn_[v]) c += cnt_[l];
    if (mn_[r] == mn_[v]) c += cnt_[r];
    // Counts above the leaves may exceed 16 bits; internal nodes keep a
    // saturated marker and exact counts are recomputed on demand.
    cnt_[v] = static_cast<std::uint16_t>(std::min<std::uint32_t>(c, 65535));
  }

  std::uint32_t exact_count(std::uint64_t v) const {
    if (v >= leaves_) return cnt_[v];
    if (cnt_[v] < 65535) return cnt_[v];
    std::uint32_t c = 0;
    if (mn_[2 * v] == mn_[v]) c += exact_count(2 * v);
    if (mn_[2 * v + 1] == mn_[v]) c += exact_count(2 * v + 1);
    return c;
  }

  std::pair<std::int64_t, std::uint64_t> query_min(std::uint64_t l, std::uint64_t r) const {
    std::int64_t m = kMax;
    std::uint64_t c = 0;
    auto take = [&](std::uint64_t v) {
      if (mn_[v] < m) m = mn_[v], c = 0;
      if (mn_[v] == m) c += exact_count(v);
    };
    for (l += leaves_, r += leaves_ + 1; l < r; l >>= 1, r >>= 1) {
      if (l & 1) take(l++);
      if (r & 1) take(--r);
    }
    return {m, c};
  }

  std::int64_t query_extreme(std::uint64_t l, std::uint64_t r, bool want_max) const {
    std::int64_t best = want_max ? kMin : kMax;
    for (l += leaves_, r += leaves_ + 1; l < r; l >>= 1, r >>= 1) {
      if (l & 1) best = want_max ? std::max<std::int64_t>(best, mx_[l]) : std::min<std::int64_t>(best, mn_[l]), ++l;
      if (r & 1) --r, best = want_max ? std::max<std::int64_t>(best, mx_[r]) : std::min<std::int64_t>(best, mn_[r]);
    }
    return best;
  }

  // First leaf >= from whose block satisfies the predicate on its max (ge) or min (le).
  std::int64_t first_block(std::uint64_t v, std::uint64_t nl, std::uint64_t nr, std::uint64_t from, std::int64_t t,
                           bool ge) const {
    if (nr < from) return -1;
    if (ge ? mx_[v] < t : mn_[v] > t) return -1;
    if (nl == nr) return nl < nblocks_ ? static_cast<std::int64_t>(nl) : -1;
    const std::uint64_t mid = (nl + nr) / 2;
    const auto left = first_block(2 * v, nl, mid, from, t, ge);
    return left >= 0 ? left : first_block(2 * v + 1, mid + 1, nr, from, t, ge);
  }

  std::int64_t last_block(std::uint64_t v, std::uint64_t nl, std::uint64_t nr, std::int64_t to, std::int64_t t,
                          bool ge) const {
    if (to < 0 || static_cast<std::int64_t>(nl) > to) return -1;
    if (ge ? mx_[v] < t : mn_[v] > t) return -1;
    if (nl == nr) return static_cast<std::int64_t>(nl);
    const std::uint64_t mid = (nl + nr) / 2;
    const auto right = last_block(2 * v + 1, mid + 1, nr, to, t, ge);
    return right >= 0 ? right : last_block(2 * v, nl, mid, to, t, ge);
  }

  std::int64_t kth_min_block(std::uint64_t v, std::uint64_t nl, std::uint64_t nr, std::uint64_t l, std::uint64_t r,
                             std::int64_t t, std::uint64_t& k) const {
    if (nr < l || nl > r || mn_[v] > t) return -1;
    if (l <= nl && nr <= r) {
      const std::uint64_t c = mn_[v] == t ? exact_count(v) : 0;
      if (c < k) {
        k -= c;
        return -1;
      }
      if (nl == nr) return static_cast<std::int64_t>(nl);
    }
    const std::uint64_t mid = (nl + nr) / 2;
    const auto left = kth_min_block(2 * v, nl, mid, l, r, t, k);
    return left >= 0 ? left : kth_min_block(2 * v + 1, mid + 1, nr, l, r, t, k);
  }

  template <class Fill, class Pred>
  std::uint64_t first_impl(std::uint64_t lo, std::int64_t t, Fill& fill, Pred pred, bool ge) const {
    if (lo == 0) lo = 1;
    if (lo > m_) return 0;
    Scratch buf(scratch());
    std::uint64_t b = (lo - 1) / block_;
    decode(b, fill, buf);
    for (std::uint64_t k = lo; k <= b * block_ + block_len(b); ++k)
      if (pred(buf[k - b * block_ - 1], t)) return k;
    const auto nb = first_block(1, 0, leaves_ - 1, b + 1, t, ge);
    if (nb < 0) return 0;
    b = static_cast<std::uint64_t>(nb);
    decode(b, fill, buf);
    for (std::uint64_t k = 0; k < block_len(b); ++k)
      if (pred(buf[k], t)) return b * block_ + k + 1;
    return 0;
  }

  template <class Fill, class Pred>
  std::optional<std::uint64_t> last_impl(std::uint64_t hi, std::int64_t t, Fill& fill, Pred pred, bool ge) const {
    if (hi > m_) hi = m_;
    Scratch buf(scratch());
    std::int64_t start_block = -1;
    if (hi >= 1) {
      const std::uint64_t b = (hi - 1) / block_;
      decode(b, fill, buf);
      for (std::uint64_t k = hi; k > b * block_; --k)
        if (pred(buf[k - b * block_ - 1], t)) return k;
      start_block = static_cast<std::int64_t>(b);
    }
    if (start_block > 0) {
      const auto nb = last_block(1, 0, leaves_ - 1, start_block - 1, t, ge);
      if (nb >= 0) {
        const auto b = static_cast<std::uint64_t>(nb);
        decode(b, fill, buf);
        for (std::uint64_t k = block_len(b); k >= 1; --k)
          if (pred(buf[k - 1], t)) return b * block_ + k;
      }
    }
    if (pred(0, t)) return 0;
    return std::nullopt;
  }

  template <class Fill>
  std::int64_t range_extreme(std::uint64_t lo, std::uint64_t hi, Fill& fill, bool want_max) const {
    const std::uint64_t bl = (lo - 1) / block_, br = (hi - 1) / block_;
    Scratch buf(scratch());
    std::int64_t best = want_max ? kMin : kMax;
    auto scan = [&](std::uint64_t b, std::uint64_t from, std::uint64_t to) {
      decode(b, fill, buf);
      for (std::uint64_t k = from; k <= to; ++k) {
        const auto v = buf[k - b * block_ - 1];
        best = want_max ? std::max(best, v) : std::min(best, v);
      }
    };
    if (bl == br) {
      scan(bl, lo, hi);
      return best;
    }
    scan(bl, lo, (bl + 1) * block_);
    if (bl + 1 <= br - 1) {
      const auto mid = query_extreme(bl + 1, br - 1, want_max);
      best = want_max ? std::max(best, mid) : std::min(best, mid);
    }
    scan(br, br * block_ + 1, hi);
    return best;
  }

  std::uint64_t m_ = 0;
  std::uint32_t block_ = 1;
  std::uint64_t nblocks_ = 0;
  std::uint64_t leaves_ = 1;
  std::int64_t total_ = 0;
  std::vector<std::int64_t> base_;
  std::vector<std::int32_t> mn_, mx_;
  std::vector<std::uint16_t> cnt_;
};

}  // namespace slt
