// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pccolor {

enum class ErrorCode {
  MissingProperty,
  MalformedHeader,
  TruncatedBody,
  UnsupportedFormat,
  IoFailure,
  InvalidTransform,
  EmptyCloud,
  IndexOutOfRange,
  EmptyDistribution,
  DegenerateDistribution,
  InvalidSpec,
  InvalidConfig,
  InvalidCloud,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pccolor
