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

#ifndef QMUT_QASM_H_
#define QMUT_QASM_H_

#include <string>
#include <string_view>

#include "qmut/circuit.h"

namespace qmut {

/// Writes a fully bound circuit as OpenQASM 3 text: version and stdgates
/// include, one `qubit[n] q;` register, one `bit[m] c;` register when
/// anything is measured, one statement per instruction in program order,
/// then `c[k] = measure q[measured[k]];` lines. Angles use 17 significant
/// digits. Throws BindError on an unbound angle.
std::string emit_qasm(const Circuit& circuit);

/// Parses the subset emit_qasm produces, plus `qreg`/`creg` declarations,
/// `measure q[i] -> c[k];`, comments, and constant angle expressions over
/// numbers, pi, + - * / and parentheses. Throws QasmError with the position
/// of the offending token.
Circuit parse_qasm(std::string_view text);

}  // namespace qmut

#endif  // QMUT_QASM_H_
