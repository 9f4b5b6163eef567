// Copyright 2026 The ISEC Authors
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

namespace isec {

/// Label text as a sequence of Unicode scalar values.
using Label32 = std::u32string;

/// Decodes UTF-8. Throws std::invalid_argument on malformed input.
Label32 utf8_decode(std::string_view utf8);
std::string utf8_encode(std::u32string_view text);
std::string utf8_encode(char32_t c);

std::string nfc(std::string_view utf8);
std::string case_fold(std::string_view utf8);

// Strips leading/trailing Unicode whitespace.
std::string trim(std::string_view utf8);
// Replaces every run of whitespace by a single U+0020.
std::string collapse_whitespace(std::string_view utf8);

}  // namespace isec
