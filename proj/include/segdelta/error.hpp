// SPDX-FileCopyrightText: 2026 segdelta contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace segdelta {

enum class ErrorCode {
  Io,
  MalformedScan,
  LabelCountMismatch,
  EmptyCloud,
  LengthMismatch,
  InvalidQs,
  NegativeAlpha,
  ZeroFrames,
  EmptyInput,
  InvalidArgument,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io: return "Io";
    case ErrorCode::MalformedScan: return "MalformedScan";
    case ErrorCode::LabelCountMismatch: return "LabelCountMismatch";
    case ErrorCode::EmptyCloud: return "EmptyCloud";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidQs: return "InvalidQs";
    case ErrorCode::NegativeAlpha: return "NegativeAlpha";
    case ErrorCode::ZeroFrames: return "ZeroFrames";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace segdelta
