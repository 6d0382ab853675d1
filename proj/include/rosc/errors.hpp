#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rosc {

enum class Errc {
  NotMonic,
  Reducible,
  ZeroPolynomial,
  ZeroModP,
  IndexObstruction,
  InvalidEmbedding,
  RelativeReducible,
  ShiftExhausted,
  NotSquarefree,
  RelativeFactorizationFailed,
  NotAnSUnit,
  QNotPrime,
  NotDescendable,
  InvalidCoverMove,
  RiemannHurwitzViolation,
  DeltaDoesNotDivide,
  NotCmField,
  CyclotomicNotDisjoint,
  NegativeMultiplicity,
  NotAbelianDeclared,
  UnsupportedGaloisShape,
  AlphaIsQthPower,
  NotOneUnit,
  EvenPrimeUnsupported,
  NonSplitCompletion,
  PrecisionExhausted,
  GeneratorNotCoprime,
  BoxTooSmall,
  CacheCorrupt,
  UnsupportedValuation,
  InvalidArgument,
  Usage,
};

inline std::string_view to_string(Errc c) {
  switch (c) {
    case Errc::NotMonic: return "NotMonic";
    case Errc::Reducible: return "Reducible";
    case Errc::ZeroPolynomial: return "ZeroPolynomial";
    case Errc::ZeroModP: return "ZeroModP";
    case Errc::IndexObstruction: return "IndexObstruction";
    case Errc::InvalidEmbedding: return "InvalidEmbedding";
    case Errc::RelativeReducible: return "RelativeReducible";
    case Errc::ShiftExhausted: return "ShiftExhausted";
    case Errc::NotSquarefree: return "NotSquarefree";
    case Errc::RelativeFactorizationFailed: return "RelativeFactorizationFailed";
    case Errc::NotAnSUnit: return "NotAnSUnit";
    case Errc::QNotPrime: return "QNotPrime";
    case Errc::NotDescendable: return "NotDescendable";
    case Errc::InvalidCoverMove: return "InvalidCoverMove";
    case Errc::RiemannHurwitzViolation: return "RiemannHurwitzViolation";
    case Errc::DeltaDoesNotDivide: return "DeltaDoesNotDivide";
    case Errc::NotCmField: return "NotCmField";
    case Errc::CyclotomicNotDisjoint: return "CyclotomicNotDisjoint";
    case Errc::NegativeMultiplicity: return "NegativeMultiplicity";
    case Errc::NotAbelianDeclared: return "NotAbelianDeclared";
    case Errc::UnsupportedGaloisShape: return "UnsupportedGaloisShape";
    case Errc::AlphaIsQthPower: return "AlphaIsQthPower";
    case Errc::NotOneUnit: return "NotOneUnit";
    case Errc::EvenPrimeUnsupported: return "EvenPrimeUnsupported";
    case Errc::NonSplitCompletion: return "NonSplitCompletion";
    case Errc::PrecisionExhausted: return "PrecisionExhausted";
    case Errc::GeneratorNotCoprime: return "GeneratorNotCoprime";
    case Errc::BoxTooSmall: return "BoxTooSmall";
    case Errc::CacheCorrupt: return "CacheCorrupt";
    case Errc::UnsupportedValuation: return "UnsupportedValuation";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Usage: return "Usage";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::string witness = {})
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), witness_(std::move(witness)) {}
  Errc code() const noexcept { return code_; }
  // offending factor / orbit / value, when the error has one
  const std::string& witness() const noexcept { return witness_; }

 private:
  Errc code_;
  std::string witness_;
};

}  // namespace rosc
