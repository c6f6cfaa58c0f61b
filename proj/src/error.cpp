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

#include "advids/error.hpp"

#include <iostream>

namespace advids {

std::string_view category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::empty_input: return "empty-input";
    case ErrorCategory::schema_mismatch: return "schema-mismatch";
    case ErrorCategory::invalid_argument: return "invalid-argument";
    case ErrorCategory::invalid_spec: return "invalid-spec";
    case ErrorCategory::unknown_label: return "unknown-label";
    case ErrorCategory::io: return "io";
    case ErrorCategory::config: return "config";
  }
  return "unknown";
}

void warn(std::string_view message) {
  std::cerr << "warning: " << message << '\n';
}

}  // namespace advids
