#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orbitforge {

enum class ErrorName {
  NotNilpotent,
  IrrationalSpectrum,
  NotInvariant,
  DimensionMismatch,
  BadParity,
  BadSignatureParam,
  WrongFamily,
  NotUniform,
  NotSpecial,
  ZeroVector,
  NoDistinguishedHeight,
  EmptyParameterSet,
  NoTable2Row,
  InvalidLabel,
  ConditionViolated,
  NotInIsotropyGroup,
  NotInGroup,
  FamilyMismatch,
  GenerationFailed,
  NoIndexDefined,
  ParseError,
};

constexpr std::string_view error_name_string(ErrorName name) {
  switch (name) {
    case ErrorName::NotNilpotent: return "NotNilpotent";
    case ErrorName::IrrationalSpectrum: return "IrrationalSpectrum";
    case ErrorName::NotInvariant: return "NotInvariant";
    case ErrorName::DimensionMismatch: return "DimensionMismatch";
    case ErrorName::BadParity: return "BadParity";
    case ErrorName::BadSignatureParam: return "BadSignatureParam";
    case ErrorName::WrongFamily: return "WrongFamily";
    case ErrorName::NotUniform: return "NotUniform";
    case ErrorName::NotSpecial: return "NotSpecial";
    case ErrorName::ZeroVector: return "ZeroVector";
    case ErrorName::NoDistinguishedHeight: return "NoDistinguishedHeight";
    case ErrorName::EmptyParameterSet: return "EmptyParameterSet";
    case ErrorName::NoTable2Row: return "NoTable2Row";
    case ErrorName::InvalidLabel: return "InvalidLabel";
    case ErrorName::ConditionViolated: return "ConditionViolated";
    case ErrorName::NotInIsotropyGroup: return "NotInIsotropyGroup";
    case ErrorName::NotInGroup: return "NotInGroup";
    case ErrorName::FamilyMismatch: return "FamilyMismatch";
    case ErrorName::GenerationFailed: return "GenerationFailed";
    case ErrorName::NoIndexDefined: return "NoIndexDefined";
    case ErrorName::ParseError: return "ParseError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
public:
  Error(ErrorName name, const std::string& detail)
      : std::runtime_error(std::string(error_name_string(name)) +
                           (detail.empty() ? "" : ": " + detail)),
        name_(name) {}

  ErrorName name() const { return name_; }

private:
  ErrorName name_;
};

[[noreturn]] inline void fail(ErrorName name, const std::string& detail = "") {
  throw Error(name, detail);
}

}  // namespace orbitforge
