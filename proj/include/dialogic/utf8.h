//
// Copyright 2026 The Dialogic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DIALOGIC_UTF8_H_
#define DIALOGIC_UTF8_H_

#include <string>
#include <string_view>

namespace dialogic {

// Throws std::invalid_argument on malformed input.
std::u32string utf8_decode(std::string_view text);
std::string utf8_encode(std::u32string_view text);
std::string utf8_encode(char32_t ch);

bool is_unicode_space(char32_t ch);

// Strips leading and trailing whitespace, including the ideographic space.
std::u32string trim(std::u32string_view text);

}  // namespace dialogic

#endif  // DIALOGIC_UTF8_H_
