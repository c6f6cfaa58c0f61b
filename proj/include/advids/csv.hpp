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

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace advids::csv {

/// Streaming RFC-4180 record reader. Quoted fields may contain commas,
/// doubled quotes and line breaks; a trailing CR is dropped.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Reads the next record into `fields`. Returns false at end of input.
  bool next(std::vector<std::string>& fields);

  /// 1-based physical line number of the last line consumed.
  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::string buf_;
  std::size_t line_ = 0;
};

void write_field(std::ostream& out, std::string_view field);
void write_record(std::ostream& out, std::span<const std::string> fields);

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);
void append_double(std::string& out, double v);

/// Full-field numeric parse (surrounding blanks allowed). Returns nullopt
/// for empty or malformed text.
std::optional<double> parse_double(std::string_view text);

}  // namespace advids::csv
