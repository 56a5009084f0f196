#pragma once

#include <cstdint>
#include <vector>

#include "essim/error.hpp"

namespace essim {

// Fixed-universe bit set used for atom index sets. Universes up to 64 bits
// (every enumeration-facing code path) stay in a single inline word; larger
// universes (cylinder spaces of Markov models) spill into a vector.
class Bits {
 public:
  Bits() = default;
  explicit Bits(int universe) : size_(universe) {
    if (universe < 0) fail(Errc::NumericOverflow, "negative bit universe");
    if (universe > 64) hi_.assign(words() - 1, 0);
  }

  static Bits from_word(int universe, std::uint64_t w) {
    Bits b(universe);
    b.w0_ = w & b.mask_for_word(0);
    return b;
  }

  int universe() const { return size_; }

  bool test(int i) const { return (word(i / 64) >> (i % 64)) & 1u; }
  void set(int i) { mutable_word(i / 64) |= std::uint64_t(1) << (i % 64); }
  void reset(int i) { mutable_word(i / 64) &= ~(std::uint64_t(1) << (i % 64)); }

  bool none() const {
    if (w0_ != 0) return false;
    for (std::uint64_t w : hi_)
      if (w != 0) return false;
    return true;
  }
  bool any() const { return !none(); }

  int count() const {
    int c = __builtin_popcountll(w0_);
    for (std::uint64_t w : hi_) c += __builtin_popcountll(w);
    return c;
  }

  // Lowest set bit, or -1.
  int first() const {
    if (w0_ != 0) return __builtin_ctzll(w0_);
    for (std::size_t k = 0; k < hi_.size(); ++k)
      if (hi_[k] != 0) return int(64 * (k + 1)) + __builtin_ctzll(hi_[k]);
    return -1;
  }

  template <class Fn>
  void for_each(Fn fn) const {
    for_word(w0_, 0, fn);
    for (std::size_t k = 0; k < hi_.size(); ++k) for_word(hi_[k], int(64 * (k + 1)), fn);
  }

  std::vector<int> indices() const {
    std::vector<int> out;
    out.reserve(count());
    for_each([&](int i) { out.push_back(i); });
    return out;
  }

  std::uint64_t word0() const { return w0_; }

  Bits operator|(const Bits& o) const { return binop(o, [](std::uint64_t a, std::uint64_t b) { return a | b; }); }
  Bits operator&(const Bits& o) const { return binop(o, [](std::uint64_t a, std::uint64_t b) { return a & b; }); }
  Bits operator-(const Bits& o) const { return binop(o, [](std::uint64_t a, std::uint64_t b) { return a & ~b; }); }
  Bits operator^(const Bits& o) const { return binop(o, [](std::uint64_t a, std::uint64_t b) { return a ^ b; }); }
  Bits& operator|=(const Bits& o) { return *this = *this | o; }
  Bits& operator&=(const Bits& o) { return *this = *this & o; }
  Bits& operator-=(const Bits& o) { return *this = *this - o; }

  Bits complement() const {
    Bits r(size_);
    r.w0_ = ~w0_ & mask_for_word(0);
    for (std::size_t k = 0; k < hi_.size(); ++k) r.hi_[k] = ~hi_[k] & mask_for_word(int(k) + 1);
    return r;
  }

  bool intersects(const Bits& o) const {
    check_same(o);
    if ((w0_ & o.w0_) != 0) return true;
    for (std::size_t k = 0; k < hi_.size(); ++k)
      if ((hi_[k] & o.hi_[k]) != 0) return true;
    return false;
  }

  bool is_subset_of(const Bits& o) const {
    check_same(o);
    if ((w0_ & ~o.w0_) != 0) return false;
    for (std::size_t k = 0; k < hi_.size(); ++k)
      if ((hi_[k] & ~o.hi_[k]) != 0) return false;
    return true;
  }

  friend bool operator==(const Bits& a, const Bits& b) {
    return a.size_ == b.size_ && a.w0_ == b.w0_ && a.hi_ == b.hi_;
  }
  friend bool operator!=(const Bits& a, const Bits& b) { return !(a == b); }

  // Numeric order (low bits least significant); gives the deterministic
  // enumeration and witness order used throughout.
  friend bool operator<(const Bits& a, const Bits& b) {
    a.check_same(b);
    for (std::size_t k = a.hi_.size(); k-- > 0;)
      if (a.hi_[k] != b.hi_[k]) return a.hi_[k] < b.hi_[k];
    return a.w0_ < b.w0_;
  }

 private:
  int words() const { return size_ <= 64 ? 1 : (size_ + 63) / 64; }

  std::uint64_t mask_for_word(int k) const {
    int lo = 64 * k;
    int hi = size_ - lo;
    if (hi >= 64) return ~std::uint64_t(0);
    if (hi <= 0) return 0;
    return (std::uint64_t(1) << hi) - 1;
  }

  std::uint64_t word(int k) const { return k == 0 ? w0_ : hi_[std::size_t(k) - 1]; }
  std::uint64_t& mutable_word(int k) { return k == 0 ? w0_ : hi_[std::size_t(k) - 1]; }

  void check_same(const Bits& o) const {
    if (size_ != o.size_) fail(Errc::SpaceMismatch, "bit sets over different universes");
  }

  template <class Op>
  Bits binop(const Bits& o, Op op) const {
    check_same(o);
    Bits r(size_);
    r.w0_ = op(w0_, o.w0_);
    for (std::size_t k = 0; k < hi_.size(); ++k) r.hi_[k] = op(hi_[k], o.hi_[k]);
    return r;
  }

  template <class Fn>
  static void for_word(std::uint64_t w, int base, Fn fn) {
    while (w != 0) {
      int b = __builtin_ctzll(w);
      fn(base + b);
      w &= w - 1;
    }
  }

  int size_ = 0;
  std::uint64_t w0_ = 0;
  std::vector<std::uint64_t> hi_;
};

}  // namespace essim
