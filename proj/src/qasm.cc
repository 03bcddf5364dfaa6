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

#include "qmut/qasm.h"

#include <cctype>
#include <charconv>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "qmut/error.h"

namespace qmut {

std::string emit_qasm(const Circuit& circuit) {
  std::string out = "OPENQASM 3.0;\ninclude \"stdgates.inc\";\n";
  out += fmt::format("qubit[{}] q;\n", circuit.num_qubits());
  const auto& measured = circuit.measured_qubits();
  if (!measured.empty()) out += fmt::format("bit[{}] c;\n", measured.size());
  for (const auto& inst : circuit.instructions()) {
    out += gate_name(inst.kind);
    if (inst.angle) {
      auto v = inst.angle->constant_value();
      if (!v) throw BindError("cannot emit unbound angle in " + to_string(inst));
      out += '(';
      out += format_angle(*v);
      out += ')';
    }
    for (std::size_t k = 0; k < inst.qubits.size(); ++k) {
      out += fmt::format("{}q[{}]", k == 0 ? " " : ", ", inst.qubits[k]);
    }
    out += ";\n";
  }
  for (std::size_t k = 0; k < measured.size(); ++k) {
    out += fmt::format("c[{}] = measure q[{}];\n", k, measured[k]);
  }
  return out;
}

namespace {

enum class Tok { kIdent, kNumber, kString, kSymbol, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> tokenize() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::kIdent;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          t.text += advance();
        }
      } else if (src_.substr(pos_, 2) == "\xCF\x80") {  // UTF-8 pi
        t.kind = Tok::kIdent;
        t.text = "pi";
        pos_ += 2;
        ++col_;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        t.kind = Tok::kNumber;
        while (pos_ < src_.size()) {
          const char d = src_[pos_];
          const bool exp_sign = (d == '+' || d == '-') && !t.text.empty() &&
                                (t.text.back() == 'e' || t.text.back() == 'E');
          if (!(std::isdigit(static_cast<unsigned char>(d)) || d == '.' || d == 'e' ||
                d == 'E' || exp_sign)) {
            break;
          }
          t.text += advance();
        }
      } else if (c == '"') {
        t.kind = Tok::kString;
        advance();
        while (pos_ < src_.size() && src_[pos_] != '"') t.text += advance();
        if (pos_ >= src_.size()) throw QasmError("unterminated string", t.line, t.column);
        advance();
      } else if (src_.substr(pos_, 2) == "->") {
        t.kind = Tok::kSymbol;
        t.text = "->";
        advance();
        advance();
      } else if (std::string_view("[](),;=+-*/").find(c) != std::string_view::npos) {
        t.kind = Tok::kSymbol;
        t.text = advance();
      } else {
        throw QasmError(fmt::format("unexpected character '{}'", c), line_, col_);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        advance();
      } else if (src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (src_.substr(pos_, 2) == "/*") {
        const int l = line_, c = col_;
        advance();
        advance();
        while (pos_ < src_.size() && src_.substr(pos_, 2) != "*/") advance();
        if (pos_ >= src_.size()) throw QasmError("unterminated comment", l, c);
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Circuit parse() {
    std::vector<Instruction> instructions;
    std::vector<std::pair<int, int>> measures;  // (bit, qubit)
    if (!peek_ident("OPENQASM")) fail("missing OPENQASM version line", peek());
    next();
    const Token& v = next();
    const bool known = v.text == "2" || v.text == "3" || v.text.rfind("2.", 0) == 0 ||
                       v.text.rfind("3.", 0) == 0;
    if (v.kind != Tok::kNumber || !known) fail("unsupported OpenQASM version " + v.text, v);
    expect(";");
    while (peek().kind != Tok::kEnd) {
      const Token& head = peek();
      if (head.kind != Tok::kIdent) fail("expected a statement", head);
      if (head.text == "include") {
        next();
        if (next().kind != Tok::kString) fail("expected include file name", prev());
        expect(";");
      } else if (head.text == "qubit" || head.text == "bit") {
        declaration_v3(head.text == "qubit");
      } else if (head.text == "qreg" || head.text == "creg") {
        declaration_v2(head.text == "qreg");
      } else if (head.text == "measure") {
        next();
        const int q = qubit_ref();
        expect("->");
        const int b = bit_ref();
        expect(";");
        measures.emplace_back(b, q);
      } else if (head.text == bit_name_ && peek(1).text == "[") {
        const int b = bit_ref();
        expect("=");
        if (!peek_ident("measure")) fail("expected measure", peek());
        next();
        const int q = qubit_ref();
        expect(";");
        measures.emplace_back(b, q);
      } else {
        instructions.push_back(gate());
      }
    }
    if (num_qubits_ < 0) fail("missing qubit declaration", peek());
    std::vector<int> measured;
    std::vector<bool> bit_used(std::max(num_bits_, 0), false);
    for (auto [b, q] : measures) {
      if (bit_used[b]) throw QasmError(fmt::format("bit {} measured twice", b), 0, 0);
      bit_used[b] = true;
      measured.push_back(q);
    }
    try {
      return Circuit(num_qubits_, std::move(instructions), std::move(measured));
    } catch (const CircuitError& e) {
      throw QasmError(e.what(), 0, 0);
    }
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  const Token& prev() const { return toks_[pos_ - 1]; }
  bool peek_ident(std::string_view s) const {
    return peek().kind == Tok::kIdent && peek().text == s;
  }
  bool peek_symbol(std::string_view s) const {
    return peek().kind == Tok::kSymbol && peek().text == s;
  }

  [[noreturn]] static void fail(const std::string& msg, const Token& at) {
    throw QasmError(msg, at.line, at.column);
  }

  void expect(std::string_view symbol) {
    const Token& t = next();
    if (t.kind != Tok::kSymbol || t.text != symbol) {
      fail(fmt::format("expected '{}'", symbol), t);
    }
  }

  std::string ident() {
    const Token& t = next();
    if (t.kind != Tok::kIdent) fail("expected identifier", t);
    return t.text;
  }

  int integer() {
    const Token& t = next();
    int v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (t.kind != Tok::kNumber || ec != std::errc() || p != t.text.data() + t.text.size()) {
      fail("expected integer", t);
    }
    return v;
  }

  void declare(bool quantum, const std::string& name, int size, const Token& at) {
    if (size < 1) fail("register size must be positive", at);
    if (quantum) {
      if (num_qubits_ >= 0) fail("only one qubit register is supported", at);
      qubit_name_ = name;
      num_qubits_ = size;
    } else {
      if (num_bits_ >= 0) fail("only one bit register is supported", at);
      bit_name_ = name;
      num_bits_ = size;
    }
  }

  void declaration_v3(bool quantum) {
    const Token& at = next();
    int size = 1;
    if (peek_symbol("[")) {
      next();
      size = integer();
      expect("]");
    }
    const std::string name = ident();
    expect(";");
    declare(quantum, name, size, at);
  }

  void declaration_v2(bool quantum) {
    const Token& at = next();
    const std::string name = ident();
    expect("[");
    const int size = integer();
    expect("]");
    expect(";");
    declare(quantum, name, size, at);
  }

  int indexed(const std::string& reg, int size, const char* what) {
    const Token& at = peek();
    if (ident() != reg) fail(fmt::format("unknown {} register", what), at);
    expect("[");
    const Token& it = peek();
    const int i = integer();
    expect("]");
    if (i < 0 || i >= size) {
      fail(fmt::format("{} index {} out of range for register of width {}", what, i, size), it);
    }
    return i;
  }

  int qubit_ref() {
    if (num_qubits_ < 0) fail("qubit used before declaration", peek());
    return indexed(qubit_name_, num_qubits_, "qubit");
  }

  int bit_ref() {
    if (num_bits_ < 0) fail("bit used before declaration", peek());
    return indexed(bit_name_, num_bits_, "bit");
  }

  Instruction gate() {
    const Token& at = peek();
    const std::string name = ident();
    const auto kind = gate_from_name(name);
    if (!kind) fail("unsupported gate '" + name + "'", at);
    Instruction inst;
    inst.kind = *kind;
    if (peek_symbol("(")) {
      next();
      inst.angle = ParamExpr::constant(expr());
      expect(")");
    }
    inst.qubits.push_back(qubit_ref());
    while (peek_symbol(",")) {
      next();
      inst.qubits.push_back(qubit_ref());
    }
    expect(";");
    if (static_cast<int>(inst.qubits.size()) != arity(*kind)) {
      fail(fmt::format("{} expects {} qubit(s)", name, arity(*kind)), at);
    }
    if (is_parameterized(*kind) != inst.angle.has_value()) {
      fail(inst.angle ? name + " takes no angle" : name + " needs an angle", at);
    }
    if (inst.qubits.size() == 2 && inst.qubits[0] == inst.qubits[1]) {
      fail(name + ": duplicate qubit", at);
    }
    return inst;
  }

  double expr() {
    double v = term();
    while (peek_symbol("+") || peek_symbol("-")) {
      const bool add = next().text == "+";
      const double rhs = term();
      v = add ? v + rhs : v - rhs;
    }
    return v;
  }

  double term() {
    double v = unary();
    while (peek_symbol("*") || peek_symbol("/")) {
      const bool mul = next().text == "*";
      const double rhs = unary();
      v = mul ? v * rhs : v / rhs;
    }
    return v;
  }

  double unary() {
    if (peek_symbol("-")) {
      next();
      return -unary();
    }
    if (peek_symbol("+")) {
      next();
      return unary();
    }
    return primary();
  }

  double primary() {
    const Token& t = next();
    if (t.kind == Tok::kNumber) {
      double v = 0.0;
      auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc() || p != t.text.data() + t.text.size()) fail("bad number", t);
      return v;
    }
    if (t.kind == Tok::kIdent && t.text == "pi") return std::numbers::pi;
    if (t.kind == Tok::kIdent && t.text == "tau") return 2 * std::numbers::pi;
    if (t.kind == Tok::kSymbol && t.text == "(") {
      const double v = expr();
      expect(")");
      return v;
    }
    fail("expected angle expression", t);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::string qubit_name_;
  std::string bit_name_;
  int num_qubits_ = -1;
  int num_bits_ = -1;
};

}  // namespace

Circuit parse_qasm(std::string_view text) {
  return Parser(Lexer(text).tokenize()).parse();
}

}  // namespace qmut
