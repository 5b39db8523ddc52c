#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grw/jet.hpp"

namespace grw {

enum class UnaryFn { Neg, Exp, Log, Sin, Cos, Sinh, Cosh, Sqrt };
enum class BinaryOp { Add, Sub, Mul, Div };

struct ExprNode;
// Expression trees are immutable and freely shared between specs.
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Kind { Constant, Variable, Unary, Binary, Pow };

  Kind kind;
  double value = 0.0;       // Constant
  int var = -1;             // Variable (coordinate index)
  UnaryFn fn{};             // Unary
  BinaryOp op{};            // Binary
  Expr lhs, rhs;            // Unary uses lhs only
  double exponent = 0.0;    // Pow
  std::size_t src_pos = 0;  // byte offset in source text, 0 for built trees
};

namespace expr {

Expr constant(double v);
Expr variable(int index);
Expr unary(UnaryFn fn, Expr e);
Expr binary(BinaryOp op, Expr lhs, Expr rhs);
Expr pow(Expr base, double exponent);

Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mul(Expr a, Expr b);
Expr div(Expr a, Expr b);
Expr neg(Expr a);

// Rebuild with variable index i replaced by mapping[i]. Used to embed a
// fiber- or warp-coordinate expression into the full coordinate list.
Expr remap_vars(const Expr& e, std::span<const int> mapping);

// Largest variable index referenced, or -1 for constant expressions.
int max_var_index(const Expr& e);

std::string to_string(const Expr& e, std::span<const std::string> var_names);

}  // namespace expr

// Name resolution for the parser: distinct variable names (index = position)
// plus optional aliases and scenario constants.
struct VarTable {
  std::vector<std::string> names;
  std::map<std::string, int> aliases;
  std::map<std::string, double> constants;

  int lookup_var(const std::string& s) const;
};

// Recursive-descent parser for the scalar expression grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' exponent)?
//   base   := number | ident | ident '(' expr ')' | '(' expr ')' | '-' base
//   exponent := number | '(' number ('/' number)? ')'
// Recognized functions: exp, log, sin, cos, sinh, cosh, sqrt. Unbound
// identifiers resolve against the constants table. Throws ParseError.
Expr parse_expr(std::string_view text, const VarTable& vars);
Expr parse_expr(std::string_view text, const std::vector<std::string>& var_names,
                const std::map<std::string, double>& constants = {});

// Plain evaluation at a point. Throws EvalError on domain violations.
double eval(const Expr& e, std::span<const double> point);

// Taylor expansion through `order` (0..3) at the point. The coefficient of
// multi-index alpha is d^alpha f / alpha!. Throws EvalError on domain
// violations or non-finite results, naming the offending node.
Jet jet_eval(const Expr& e, std::span<const double> point, int order);

}  // namespace grw
