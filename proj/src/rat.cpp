#include "essim/rat.hpp"

#include <charconv>
#include <limits>
#include <ostream>

namespace essim {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || s.empty())
    fail(Errc::SyntaxError, "not an exact rational: '" + std::string(whole) + "'");
  return v;
}

}  // namespace

Rat Rat::from_i128(i128 n, i128 d) {
  if (d == 0) fail(Errc::NumericOverflow, "zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  i128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  constexpr i128 lo = std::numeric_limits<std::int64_t>::min();
  constexpr i128 hi = std::numeric_limits<std::int64_t>::max();
  if (n < lo || n > hi || d > hi) fail(Errc::NumericOverflow, "rational exceeds 64-bit range");
  Rat r;
  r.num_ = std::int64_t(n);
  r.den_ = std::int64_t(d);
  return r;
}

Rat Rat::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rat(parse_int(text, text));
  std::int64_t n = parse_int(text.substr(0, slash), text);
  std::int64_t d = parse_int(text.substr(slash + 1), text);
  if (d == 0) fail(Errc::SyntaxError, "zero denominator: '" + std::string(text) + "'");
  return make(n, d);
}

std::string Rat::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::NegativeWeight: return "NegativeWeight";
    case Errc::PartitionGap: return "PartitionGap";
    case Errc::PartitionOverlap: return "PartitionOverlap";
    case Errc::DuplicatePoint: return "DuplicatePoint";
    case Errc::SpaceMismatch: return "SpaceMismatch";
    case Errc::NotMeasurable: return "NotMeasurable";
    case Errc::NotNullPreserving: return "NotNullPreserving";
    case Errc::InvalidMap: return "InvalidMap";
    case Errc::TableIncomplete: return "TableIncomplete";
    case Errc::TooManyAtoms: return "TooManyAtoms";
    case Errc::NotNonsingular: return "NotNonsingular";
    case Errc::NotNormalized: return "NotNormalized";
    case Errc::InvalidEpsilon: return "InvalidEpsilon";
    case Errc::NotForwardInvariant: return "NotForwardInvariant";
    case Errc::NotATailSet: return "NotATailSet";
    case Errc::NotInvariant: return "NotInvariant";
    case Errc::NotAProbability: return "NotAProbability";
    case Errc::InvalidModel: return "InvalidModel";
    case Errc::InvalidDepth: return "InvalidDepth";
    case Errc::NotStationary: return "NotStationary";
    case Errc::NotIrreducible: return "NotIrreducible";
    case Errc::TooLarge: return "TooLarge";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnknownIdentifier: return "UnknownIdentifier";
    case Errc::NotAnAtomUnion: return "NotAnAtomUnion";
    case Errc::NumericOverflow: return "NumericOverflow";
    case Errc::CrossCheckFailed: return "CrossCheckFailed";
  }
  return "UnknownError";
}

}  // namespace essim
