// Copyright 2026 The Datavoid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace datavoid {

// Broad failure classes. Each maps onto one HTTP status family and one
// C API status code.
enum class ErrorCode {
  validation,  // caller-supplied data violates a schema or precondition
  not_found,   // unknown topic / source / room
  conflict,    // config hash mismatch
  fatal,       // unreadable input, insufficient training support, I/O
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline Error validation_error(const std::string& msg) {
  return Error(ErrorCode::validation, msg);
}
inline Error not_found_error(const std::string& msg) {
  return Error(ErrorCode::not_found, msg);
}
inline Error fatal_error(const std::string& msg) {
  return Error(ErrorCode::fatal, msg);
}

std::string_view to_string(ErrorCode code) noexcept;

}  // namespace datavoid
