// Copyright 2026 The domino-sim Authors
// SPDX-License-Identifier: Apache-2.0
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

// error.hpp

#ifndef DOMINO_ERROR_HPP
#define DOMINO_ERROR_HPP

#include <stdexcept>
#include <string>

namespace domino {

/// A caller broke a documented precondition.
class ContractViolation : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// An operation was invoked on a node whose role does not support it.
class RoleViolation : public ContractViolation {
  public:
    using ContractViolation::ContractViolation;
};

/// Invalid configuration or scenario input. `key()` names the offending
/// setting and `line()` is the 1-based source line when known (0 otherwise).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& key, const std::string& what, int line = 0)
        : std::runtime_error(format(key, what, line)), key_(key), line_(line)
    {
    }

    const std::string& key() const { return key_; }
    int line() const { return line_; }

  private:
    static std::string format(const std::string& key, const std::string& what, int line)
    {
        std::string s;
        if (line > 0) {
            s += "line " + std::to_string(line) + ": ";
        }
        if (!key.empty()) {
            s += key + ": ";
        }
        return s + what;
    }

    std::string key_;
    int line_;
};

}  // namespace domino

#endif  // DOMINO_ERROR_HPP
