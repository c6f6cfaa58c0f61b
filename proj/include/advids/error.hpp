// Copyright 2026 The advids Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace advids {

/// Coarse failure classes. The CLI prints the category name as the
/// machine-parseable part of its one-line error report.
enum class ErrorCategory {
  empty_input,
  schema_mismatch,
  invalid_argument,
  invalid_spec,
  unknown_label,
  io,
  config,
};

std::string_view category_name(ErrorCategory c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory c, const std::string& message) {
  throw Error(c, message);
}

inline void require(bool cond, ErrorCategory c, const std::string& message) {
  if (!cond) throw Error(c, message);
}

/// Non-fatal diagnostics (degenerate training data and the like) go to stderr.
void warn(std::string_view message);

}  // namespace advids
