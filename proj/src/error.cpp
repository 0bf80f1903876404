#include "polyaut/error.hpp"

namespace polyaut {

std::string_view reason_name(Reason r) {
  switch (r) {
    case Reason::FieldMismatch: return "FieldMismatch";
    case Reason::ArityMismatch: return "ArityMismatch";
    case Reason::InvalidArgument: return "InvalidArgument";
    case Reason::ParseError: return "ParseError";
    case Reason::NotAutomorphism: return "NotAutomorphism";
    case Reason::JacobianNotConstant: return "JacobianNotConstant";
    case Reason::JacobianZero: return "JacobianZero";
    case Reason::LinearPartSingular: return "LinearPartSingular";
    case Reason::InverseDegreeExceeded: return "InverseDegreeExceeded";
    case Reason::NonZeroConstantTerm: return "NonZeroConstantTerm";
    case Reason::PositiveCharacteristic: return "PositiveCharacteristic";
    case Reason::NotLocallyNilpotent: return "NotLocallyNilpotent";
    case Reason::NegativeValuation: return "NegativeValuation";
    case Reason::TriangularInput: return "TriangularInput";
    case Reason::IdentityInput: return "IdentityInput";
    case Reason::LengthOutOfRange: return "LengthOutOfRange";
    case Reason::RewriteStalled: return "RewriteStalled";
    case Reason::FieldTooSmall: return "FieldTooSmall";
    case Reason::DegreeTooSmall: return "DegreeTooSmall";
    case Reason::NotWeaklyGeneral: return "NotWeaklyGeneral";
    case Reason::PropertyViolation: return "PropertyViolation";
    case Reason::ClosureCapExceeded: return "ClosureCapExceeded";
  }
  return "Unknown";
}

bool Error::is_rejection() const noexcept {
  switch (reason_) {
    case Reason::FieldMismatch:
    case Reason::ArityMismatch:
    case Reason::InvalidArgument:
    case Reason::ParseError:
      return false;
    default:
      return true;
  }
}

void fail(Reason reason, const std::string& what) { throw Error(reason, what); }

}  // namespace polyaut
