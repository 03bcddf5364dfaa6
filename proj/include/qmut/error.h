// Copyright 2026 The qmut Authors
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

#ifndef QMUT_ERROR_H_
#define QMUT_ERROR_H_

#include <stdexcept>
#include <string>

namespace qmut {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structural violation of a circuit invariant (bad qubit, arity, angle).
class CircuitError : public Error {
 public:
  using Error::Error;
};

/// A parameter expression could not be evaluated under the given bindings.
class BindError : public Error {
 public:
  using Error::Error;
};

class QasmError : public Error {
 public:
  QasmError(const std::string& message, int line, int column)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// The circuit has no measured qubit, so no label can be decoded.
class NoMeasurementError : public Error {
 public:
  NoMeasurementError() : Error("no measurement") {}
};

class DataError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qmut

#endif  // QMUT_ERROR_H_
