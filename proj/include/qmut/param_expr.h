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

#ifndef QMUT_PARAM_EXPR_H_
#define QMUT_PARAM_EXPR_H_

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace qmut {

/// Symbol name -> value in radians.
using Bindings = std::map<std::string, double, std::less<>>;

/// Immutable expression tree for gate angles.
///
/// Expressions are built from constants, symbol references, negation, sums
/// and products. That is enough for every angle the feature maps and ansatzes
/// produce, e.g. 2*(pi - x[0])*(pi - x[1]) in the ZZ feature map. There are
/// no transcendental functions on purpose: a bound angle is always a
/// polynomial in the symbols.
///
/// Nodes are shared between copies, so copying a ParamExpr is cheap.
class ParamExpr {
 public:
  enum class Op { kConstant, kSymbol, kNegate, kAdd, kMultiply };

  ParamExpr();  // constant 0

  static ParamExpr constant(double value);
  static ParamExpr symbol(std::string name);

  /// (pi - symbol), the ZZ feature map building block.
  static ParamExpr pi_minus(std::string name);

  Op op() const;
  bool is_constant() const { return op() == Op::kConstant; }
  /// Value of a constant node, std::nullopt otherwise.
  std::optional<double> constant_value() const;
  /// Name of a symbol node.
  const std::string& symbol_name() const;

  /// Evaluates under a full binding. Throws BindError on a missing symbol or
  /// a non-finite result.
  double evaluate(const Bindings& bindings) const;

  /// Replaces the bound symbols by constants and folds constant subtrees.
  /// Unbound symbols are kept.
  ParamExpr substitute(const Bindings& bindings) const;

  /// Renames symbols found in `names`; other nodes are shared, not copied.
  ParamExpr rename(const std::map<std::string, std::string, std::less<>>& names) const;

  std::set<std::string> free_symbols() const;
  void collect_symbols(std::set<std::string>& out) const;
  bool has_symbols() const;

  /// Deterministic text form. Constants print with 17 significant digits so
  /// the text identifies the value exactly.
  std::string to_string() const;

  friend ParamExpr operator-(const ParamExpr& e);
  friend ParamExpr operator+(const ParamExpr& a, const ParamExpr& b);
  friend ParamExpr operator-(const ParamExpr& a, const ParamExpr& b);
  friend ParamExpr operator*(const ParamExpr& a, const ParamExpr& b);

  friend bool operator==(const ParamExpr& a, const ParamExpr& b) {
    return a.to_string() == b.to_string();
  }

  struct Node;  // opaque, defined in param_expr.cc

 private:
  explicit ParamExpr(std::shared_ptr<const Node> node);

  std::shared_ptr<const Node> node_;
};

/// Formats a double with 17 significant digits ("%.17g").
std::string format_angle(double value);

}  // namespace qmut

#endif  // QMUT_PARAM_EXPR_H_
