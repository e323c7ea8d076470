// Copyright 2026 The dronefx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dronefx {

/// Replaces every invalid UTF-8 sequence with U+FFFD.
std::string to_valid_utf8(std::string_view bytes);

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string_view> split_lines(std::string_view text);
std::vector<std::string> split(std::string_view s, char sep);

/// RFC 4180 records: quoted fields may hold separators, doubled quotes and
/// line breaks. Blank lines yield no record.
std::vector<std::vector<std::string>> parse_csv(std::string_view text, char sep = ',');
/// RFC 4180 quoting, applied only when the field needs it.
std::string csv_field(std::string_view field, char sep = ',');
std::string csv_quoted(std::string_view field);

/// Shortest decimal text that reads back as the same double.
std::string format_double(double v);

}  // namespace dronefx
