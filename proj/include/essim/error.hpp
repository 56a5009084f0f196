#pragma once

#include <stdexcept>
#include <string>

namespace essim {

// Every failure the library reports carries one of these codes. The CLI maps
// CrossCheckFailed to exit code 1 and everything else to exit code 2.
enum class Errc {
  // measure_core
  NegativeWeight,
  PartitionGap,
  PartitionOverlap,
  DuplicatePoint,
  SpaceMismatch,
  NotMeasurable,
  NotNullPreserving,
  // images
  InvalidMap,
  TableIncomplete,
  TooManyAtoms,
  // dynamics
  NotNonsingular,
  NotNormalized,
  InvalidEpsilon,
  NotForwardInvariant,
  // tail
  NotATailSet,
  NotInvariant,
  NotAProbability,
  // markov
  InvalidModel,
  InvalidDepth,
  NotStationary,
  NotIrreducible,
  // oracle
  TooLarge,
  // cli / parsing
  SyntaxError,
  UnknownIdentifier,
  NotAnAtomUnion,
  // arithmetic
  NumericOverflow,
  // a dual-route computation disagreed with itself; indicates a bug, never bad input
  CrossCheckFailed,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code),
        message_(message) {}

  Errc code() const { return code_; }
  // The diagnostic without the code prefix (for rewrapping with locations).
  const std::string& message() const { return message_; }

 private:
  Errc code_;
  std::string message_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) { throw Error(code, message); }

// Used where two independent routes to the same value are compared at runtime.
[[noreturn]] inline void cross_check_failed(const std::string& what) {
  throw Error(Errc::CrossCheckFailed, what);
}

}  // namespace essim
