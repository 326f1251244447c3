// Copyright 2026 The Contextual Speed Controller Authors
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

#ifndef CSC__FORMAT_HPP_
#define CSC__FORMAT_HPP_

#include <optional>
#include <string>
#include <string_view>

namespace csc
{

/// Shortest decimal text that parses back to exactly `value`.
std::string formatNumber(double value);

/// Empty string for an absent value.
std::string formatOptional(const std::optional<double> & value);

/// Strict full-string parse; throws std::invalid_argument.
double parseNumber(std::string_view text);

}  // namespace csc

#endif  // CSC__FORMAT_HPP_
