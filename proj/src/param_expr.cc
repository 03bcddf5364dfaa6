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

#include "qmut/param_expr.h"

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "qmut/error.h"

namespace qmut {

struct ParamExpr::Node {
  Op op = Op::kConstant;
  double value = 0.0;
  std::string name;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const ParamExpr::Node>;

}  // namespace

ParamExpr::ParamExpr() : ParamExpr(constant(0.0)) {}

ParamExpr::ParamExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

ParamExpr ParamExpr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->op = Op::kConstant;
  n->value = value;
  return ParamExpr(std::move(n));
}

ParamExpr ParamExpr::symbol(std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::kSymbol;
  n->name = std::move(name);
  return ParamExpr(std::move(n));
}

ParamExpr ParamExpr::pi_minus(std::string name) {
  return constant(std::numbers::pi) - symbol(std::move(name));
}

ParamExpr::Op ParamExpr::op() const { return node_->op; }

std::optional<double> ParamExpr::constant_value() const {
  if (node_->op != Op::kConstant) return std::nullopt;
  return node_->value;
}

const std::string& ParamExpr::symbol_name() const { return node_->name; }

ParamExpr operator-(const ParamExpr& e) {
  if (e.node_->op == ParamExpr::Op::kConstant) {
    return ParamExpr::constant(-e.node_->value);
  }
  // Double negation collapses so that sign flips are exact involutions.
  if (e.node_->op == ParamExpr::Op::kNegate) return ParamExpr(e.node_->lhs);
  auto n = std::make_shared<ParamExpr::Node>();
  n->op = ParamExpr::Op::kNegate;
  n->lhs = e.node_;
  return ParamExpr(std::move(n));
}

ParamExpr operator+(const ParamExpr& a, const ParamExpr& b) {
  if (a.is_constant() && b.is_constant()) {
    return ParamExpr::constant(a.node_->value + b.node_->value);
  }
  auto n = std::make_shared<ParamExpr::Node>();
  n->op = ParamExpr::Op::kAdd;
  n->lhs = a.node_;
  n->rhs = b.node_;
  return ParamExpr(std::move(n));
}

ParamExpr operator-(const ParamExpr& a, const ParamExpr& b) { return a + (-b); }

ParamExpr operator*(const ParamExpr& a, const ParamExpr& b) {
  if (a.is_constant() && b.is_constant()) {
    return ParamExpr::constant(a.node_->value * b.node_->value);
  }
  auto n = std::make_shared<ParamExpr::Node>();
  n->op = ParamExpr::Op::kMultiply;
  n->lhs = a.node_;
  n->rhs = b.node_;
  return ParamExpr(std::move(n));
}

namespace {

double eval_node(const ParamExpr::Node& n, const Bindings& b) {
  switch (n.op) {
    case ParamExpr::Op::kConstant:
      return n.value;
    case ParamExpr::Op::kSymbol: {
      auto it = b.find(n.name);
      if (it == b.end()) throw BindError("missing symbol: " + n.name);
      return it->second;
    }
    case ParamExpr::Op::kNegate:
      return -eval_node(*n.lhs, b);
    case ParamExpr::Op::kAdd:
      return eval_node(*n.lhs, b) + eval_node(*n.rhs, b);
    case ParamExpr::Op::kMultiply:
      return eval_node(*n.lhs, b) * eval_node(*n.rhs, b);
  }
  return 0.0;
}

void collect(const ParamExpr::Node& n, std::set<std::string>& out) {
  switch (n.op) {
    case ParamExpr::Op::kConstant:
      return;
    case ParamExpr::Op::kSymbol:
      out.insert(n.name);
      return;
    case ParamExpr::Op::kNegate:
      collect(*n.lhs, out);
      return;
    case ParamExpr::Op::kAdd:
    case ParamExpr::Op::kMultiply:
      collect(*n.lhs, out);
      collect(*n.rhs, out);
      return;
  }
}

bool any_symbol(const ParamExpr::Node& n) {
  switch (n.op) {
    case ParamExpr::Op::kConstant:
      return false;
    case ParamExpr::Op::kSymbol:
      return true;
    case ParamExpr::Op::kNegate:
      return any_symbol(*n.lhs);
    case ParamExpr::Op::kAdd:
    case ParamExpr::Op::kMultiply:
      return any_symbol(*n.lhs) || any_symbol(*n.rhs);
  }
  return false;
}

void print(const ParamExpr::Node& n, std::string& out) {
  switch (n.op) {
    case ParamExpr::Op::kConstant:
      out += format_angle(n.value);
      return;
    case ParamExpr::Op::kSymbol:
      out += n.name;
      return;
    case ParamExpr::Op::kNegate:
      out += "-(";
      print(*n.lhs, out);
      out += ')';
      return;
    case ParamExpr::Op::kAdd:
    case ParamExpr::Op::kMultiply:
      out += '(';
      print(*n.lhs, out);
      out += n.op == ParamExpr::Op::kAdd ? " + " : " * ";
      print(*n.rhs, out);
      out += ')';
      return;
  }
}

}  // namespace

double ParamExpr::evaluate(const Bindings& bindings) const {
  const double v = eval_node(*node_, bindings);
  if (!std::isfinite(v)) {
    throw BindError("non-finite angle from expression " + to_string());
  }
  return v;
}

ParamExpr ParamExpr::substitute(const Bindings& bindings) const {
  switch (node_->op) {
    case Op::kConstant:
      return *this;
    case Op::kSymbol: {
      auto it = bindings.find(node_->name);
      if (it == bindings.end()) return *this;
      if (!std::isfinite(it->second)) {
        throw BindError("non-finite value for symbol " + node_->name);
      }
      return constant(it->second);
    }
    case Op::kNegate:
      return -ParamExpr(node_->lhs).substitute(bindings);
    case Op::kAdd:
      return ParamExpr(node_->lhs).substitute(bindings) +
             ParamExpr(node_->rhs).substitute(bindings);
    case Op::kMultiply:
      return ParamExpr(node_->lhs).substitute(bindings) *
             ParamExpr(node_->rhs).substitute(bindings);
  }
  return *this;
}

ParamExpr ParamExpr::rename(
    const std::map<std::string, std::string, std::less<>>& names) const {
  switch (node_->op) {
    case Op::kConstant:
      return *this;
    case Op::kSymbol: {
      auto it = names.find(node_->name);
      return it == names.end() ? *this : symbol(it->second);
    }
    case Op::kNegate:
      return -ParamExpr(node_->lhs).rename(names);
    case Op::kAdd:
      return ParamExpr(node_->lhs).rename(names) + ParamExpr(node_->rhs).rename(names);
    case Op::kMultiply:
      return ParamExpr(node_->lhs).rename(names) * ParamExpr(node_->rhs).rename(names);
  }
  return *this;
}

std::set<std::string> ParamExpr::free_symbols() const {
  std::set<std::string> out;
  collect(*node_, out);
  return out;
}

void ParamExpr::collect_symbols(std::set<std::string>& out) const {
  collect(*node_, out);
}

bool ParamExpr::has_symbols() const { return any_symbol(*node_); }

std::string ParamExpr::to_string() const {
  std::string out;
  print(*node_, out);
  return out;
}

std::string format_angle(double value) {
  if (value == 0.0) return "0";  // folds -0 as well
  return fmt::format("{:.17g}", value);
}

}  // namespace qmut
