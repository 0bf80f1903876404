#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace polyaut {

// Every failure the library reports carries one of these tags so that the
// command-line front end can emit a machine-readable reason.
enum class Reason {
  FieldMismatch,
  ArityMismatch,
  InvalidArgument,
  ParseError,
  NotAutomorphism,
  JacobianNotConstant,
  JacobianZero,
  LinearPartSingular,
  InverseDegreeExceeded,
  NonZeroConstantTerm,
  PositiveCharacteristic,
  NotLocallyNilpotent,
  NegativeValuation,
  TriangularInput,
  IdentityInput,
  LengthOutOfRange,
  RewriteStalled,
  FieldTooSmall,
  DegreeTooSmall,
  NotWeaklyGeneral,
  PropertyViolation,
  ClosureCapExceeded,
};

std::string_view reason_name(Reason r);

class Error : public std::runtime_error {
 public:
  Error(Reason reason, const std::string& what)
      : std::runtime_error(what), reason_(reason) {}

  Reason reason() const noexcept { return reason_; }

  // Mathematical rejections (as opposed to malformed input or misuse).
  bool is_rejection() const noexcept;

 private:
  Reason reason_;
};

[[noreturn]] void fail(Reason reason, const std::string& what);

// Takes a literal so that the success path never allocates; composed
// messages belong behind an explicit `if`.
inline void require(bool cond, Reason reason, const char* what) {
  if (!cond) fail(reason, what);
}

}  // namespace polyaut
