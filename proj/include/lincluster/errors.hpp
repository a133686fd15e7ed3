// Copyright 2026 The lincluster Authors
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

#ifndef LINCLUSTER_ERRORS_HPP
#define LINCLUSTER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lincluster {

// Malformed setup: duplicate/unknown modes, mismatched registers, bad wiring.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input values outside the documented domain (non-normalized amplitudes,
// transmissions outside [0,1], out-of-range sizes).
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Text input that cannot be parsed; carries a 1-based line number when known.
class parse_error : public std::runtime_error {
 public:
  explicit parse_error(const std::string& msg, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// A documented precondition between modules was violated by the caller.
class contract_error : public std::logic_error {
 public:
  explicit contract_error(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace lincluster

#endif  // LINCLUSTER_ERRORS_HPP
