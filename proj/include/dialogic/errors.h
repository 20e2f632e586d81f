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

#ifndef DIALOGIC_ERRORS_H_
#define DIALOGIC_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dialogic {

// Invalid experiment or component configuration.
class ConfigError : public std::runtime_error {
 public:
  // `field` is a dotted path such as "noise.target_cer"; empty when the error
  // is not tied to one field.
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// A caller broke an operation's precondition (shape, normalization, label
// constraints).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A loss or gradient became NaN or infinite.
class NumericError : public std::runtime_error {
 public:
  NumericError(std::string term, const std::string& message)
      : std::runtime_error(message), term_(std::move(term)) {}

  // "cross-entropy" or "contrastive".
  const std::string& term() const { return term_; }

 private:
  std::string term_;
};

}  // namespace dialogic

#endif  // DIALOGIC_ERRORS_H_
