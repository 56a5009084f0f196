#pragma once

#include <cstdint>
#include <iosfwd>
#include <numeric>
#include <string>
#include <string_view>

#include "essim/error.hpp"

namespace essim {

// Exact rational arithmetic. Values are always reduced with a positive
// denominator; no floating point is involved anywhere. Intermediate products
// use 128-bit arithmetic, and a result whose reduced numerator or denominator
// leaves the int64 range throws NumericOverflow instead of wrapping.
class Rat {
 public:
  Rat() = default;
  Rat(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit on purpose
  Rat(std::int64_t n, std::int64_t d) { *this = make(n, d); }

  static Rat make(std::int64_t n, std::int64_t d) {
    if (d == 0) fail(Errc::NumericOverflow, "zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    Rat r;
    r.num_ = n;
    r.den_ = d;
    return r;
  }

  // Accepts "p", "-p", "p/q"; anything else (decimals included) is rejected.
  static Rat parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }
  bool is_positive() const { return num_ > 0; }
  bool is_integer() const { return den_ == 1; }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return from_i128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return from_i128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return from_i128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) fail(Errc::NumericOverflow, "division by zero");
    return from_i128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }
  Rat operator-() const {
    Rat r = *this;
    r.num_ = -r.num_;
    return r;
  }
  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
  }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

  // "p/q" for non-integers, plain "p" otherwise.
  std::string str() const;

 private:
  using i128 = __int128;

  static Rat from_i128(i128 n, i128 d);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

}  // namespace essim
