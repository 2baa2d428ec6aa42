#pragma once

#include <stdexcept>
#include <string>

namespace corrdyn {

enum class ErrorCode {
  InvalidArgument,
  ZeroPolynomial,
  NonConvergence,
  DegenerateResultant,
  IllConditioned,
  DegenerateFiber,
  ImproperGraph,
  FitUnstable,
  DiagonalDegenerate,
  TreeTooLarge,
  GuardExceeded,
  BranchCollision,
  BadBasePoint,
  CycleRecoveryFailed,
  IoError,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + msg), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

inline const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::DegenerateResultant: return "DegenerateResultant";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::DegenerateFiber: return "DegenerateFiber";
    case ErrorCode::ImproperGraph: return "ImproperGraph";
    case ErrorCode::FitUnstable: return "FitUnstable";
    case ErrorCode::DiagonalDegenerate: return "DiagonalDegenerate";
    case ErrorCode::TreeTooLarge: return "TreeTooLarge";
    case ErrorCode::GuardExceeded: return "GuardExceeded";
    case ErrorCode::BranchCollision: return "BranchCollision";
    case ErrorCode::BadBasePoint: return "BadBasePoint";
    case ErrorCode::CycleRecoveryFailed: return "CycleRecoveryFailed";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace corrdyn
