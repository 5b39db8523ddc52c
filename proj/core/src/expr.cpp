#include "grw/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "grw/errors.hpp"

namespace grw {

namespace expr {

namespace {

Expr make(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

}  // namespace

Expr constant(double v) {
  ExprNode n;
  n.kind = ExprNode::Kind::Constant;
  n.value = v;
  return make(std::move(n));
}

Expr variable(int index) {
  ExprNode n;
  n.kind = ExprNode::Kind::Variable;
  n.var = index;
  return make(std::move(n));
}

Expr unary(UnaryFn fn, Expr e) {
  ExprNode n;
  n.kind = ExprNode::Kind::Unary;
  n.fn = fn;
  n.lhs = std::move(e);
  return make(std::move(n));
}

Expr binary(BinaryOp op, Expr lhs, Expr rhs) {
  ExprNode n;
  n.kind = ExprNode::Kind::Binary;
  n.op = op;
  n.lhs = std::move(lhs);
  n.rhs = std::move(rhs);
  return make(std::move(n));
}

Expr pow(Expr base, double exponent) {
  ExprNode n;
  n.kind = ExprNode::Kind::Pow;
  n.lhs = std::move(base);
  n.exponent = exponent;
  return make(std::move(n));
}

Expr add(Expr a, Expr b) { return binary(BinaryOp::Add, std::move(a), std::move(b)); }
Expr sub(Expr a, Expr b) { return binary(BinaryOp::Sub, std::move(a), std::move(b)); }
Expr mul(Expr a, Expr b) { return binary(BinaryOp::Mul, std::move(a), std::move(b)); }
Expr div(Expr a, Expr b) { return binary(BinaryOp::Div, std::move(a), std::move(b)); }
Expr neg(Expr a) { return unary(UnaryFn::Neg, std::move(a)); }

Expr remap_vars(const Expr& e, std::span<const int> mapping) {
  switch (e->kind) {
    case ExprNode::Kind::Constant:
      return e;
    case ExprNode::Kind::Variable: {
      if (e->var < 0 || e->var >= static_cast<int>(mapping.size()))
        throw ValidationError("remap_vars: variable index outside mapping");
      return variable(mapping[e->var]);
    }
    case ExprNode::Kind::Unary:
      return unary(e->fn, remap_vars(e->lhs, mapping));
    case ExprNode::Kind::Binary:
      return binary(e->op, remap_vars(e->lhs, mapping), remap_vars(e->rhs, mapping));
    case ExprNode::Kind::Pow:
      return pow(remap_vars(e->lhs, mapping), e->exponent);
  }
  throw ValidationError("remap_vars: bad node");
}

int max_var_index(const Expr& e) {
  switch (e->kind) {
    case ExprNode::Kind::Constant:
      return -1;
    case ExprNode::Kind::Variable:
      return e->var;
    case ExprNode::Kind::Unary:
    case ExprNode::Kind::Pow:
      return max_var_index(e->lhs);
    case ExprNode::Kind::Binary:
      return std::max(max_var_index(e->lhs), max_var_index(e->rhs));
  }
  return -1;
}

namespace {

const char* fn_name(UnaryFn f) {
  switch (f) {
    case UnaryFn::Neg: return "neg";
    case UnaryFn::Exp: return "exp";
    case UnaryFn::Log: return "log";
    case UnaryFn::Sin: return "sin";
    case UnaryFn::Cos: return "cos";
    case UnaryFn::Sinh: return "sinh";
    case UnaryFn::Cosh: return "cosh";
    case UnaryFn::Sqrt: return "sqrt";
  }
  return "?";
}

}  // namespace

std::string to_string(const Expr& e, std::span<const std::string> var_names) {
  std::ostringstream os;
  switch (e->kind) {
    case ExprNode::Kind::Constant:
      os << e->value;
      break;
    case ExprNode::Kind::Variable:
      if (e->var < static_cast<int>(var_names.size()))
        os << var_names[e->var];
      else
        os << "x[" << e->var << "]";
      break;
    case ExprNode::Kind::Unary:
      if (e->fn == UnaryFn::Neg)
        os << "(-" << to_string(e->lhs, var_names) << ")";
      else
        os << fn_name(e->fn) << "(" << to_string(e->lhs, var_names) << ")";
      break;
    case ExprNode::Kind::Binary: {
      char op = e->op == BinaryOp::Add   ? '+'
                : e->op == BinaryOp::Sub ? '-'
                : e->op == BinaryOp::Mul ? '*'
                                         : '/';
      os << "(" << to_string(e->lhs, var_names) << " " << op << " "
         << to_string(e->rhs, var_names) << ")";
      break;
    }
    case ExprNode::Kind::Pow:
      os << to_string(e->lhs, var_names) << "^" << e->exponent;
      break;
  }
  return os.str();
}

}  // namespace expr

int VarTable::lookup_var(const std::string& s) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == s) return static_cast<int>(i);
  auto it = aliases.find(s);
  if (it != aliases.end()) return it->second;
  return -1;
}

namespace {

struct Token {
  enum class Kind { Number, Ident, Op, End };
  Kind kind;
  double number = 0.0;
  std::string ident;
  char op = 0;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
    tok_.pos = i_;
    if (i_ >= text_.size()) {
      tok_.kind = Token::Kind::End;
      return;
    }
    char c = text_[i_];
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[i_ + 1])))) {
      std::size_t j = i_;
      while (j < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[j])) || text_[j] == '.')) ++j;
      if (j < text_.size() && (text_[j] == 'e' || text_[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < text_.size() && (text_[k] == '+' || text_[k] == '-')) ++k;
        if (k < text_.size() && std::isdigit(static_cast<unsigned char>(text_[k]))) {
          ++k;
          while (k < text_.size() && std::isdigit(static_cast<unsigned char>(text_[k]))) ++k;
          j = k;
        }
      }
      double v = 0.0;
      auto res = std::from_chars(text_.data() + i_, text_.data() + j, v);
      if (res.ec != std::errc() || res.ptr != text_.data() + j)
        throw ParseError("malformed number literal", i_);
      tok_.kind = Token::Kind::Number;
      tok_.number = v;
      i_ = j;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i_;
      while (j < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_')) ++j;
      tok_.kind = Token::Kind::Ident;
      tok_.ident.assign(text_.substr(i_, j - i_));
      i_ = j;
      return;
    }
    if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^' || c == '(' || c == ')') {
      tok_.kind = Token::Kind::Op;
      tok_.op = c;
      ++i_;
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", i_);
  }

  std::string_view text_;
  std::size_t i_ = 0;
  Token tok_;
};

class Parser {
 public:
  Parser(std::string_view text, const VarTable& vars) : lex_(text), vars_(vars) {}

  Expr parse() {
    Expr e = parse_sum();
    const Token& t = lex_.peek();
    if (t.kind != Token::Kind::End)
      throw ParseError("trailing input after expression", t.pos);
    return e;
  }

 private:
  [[noreturn]] static void fail(const Token& t, const std::string& what) {
    std::ostringstream os;
    os << what << " at position " << t.pos;
    if (t.kind == Token::Kind::Ident) os << " near '" << t.ident << "'";
    if (t.kind == Token::Kind::Op) os << " near '" << t.op << "'";
    throw ParseError(os.str(), t.pos);
  }

  bool match_op(char c) {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Op && t.op == c) {
      lex_.take();
      return true;
    }
    return false;
  }

  void expect_op(char c, const char* what) {
    if (!match_op(c)) fail(lex_.peek(), what);
  }

  Expr parse_sum() {
    Expr e = parse_term();
    while (true) {
      if (match_op('+'))
        e = expr::add(e, parse_term());
      else if (match_op('-'))
        e = expr::sub(e, parse_term());
      else
        return e;
    }
  }

  Expr parse_term() {
    Expr e = parse_factor();
    while (true) {
      if (match_op('*'))
        e = expr::mul(e, parse_factor());
      else if (match_op('/'))
        e = expr::div(e, parse_factor());
      else
        return e;
    }
  }

  Expr parse_factor() {
    Expr base = parse_base();
    if (match_op('^')) return expr::pow(base, parse_exponent());
    return base;
  }

  double parse_exponent() {
    Token t = lex_.peek();
    if (t.kind == Token::Kind::Number) {
      lex_.take();
      return t.number;
    }
    if (t.kind == Token::Kind::Op && t.op == '(') {
      lex_.take();
      Token num = lex_.take();
      if (num.kind != Token::Kind::Number) fail(num, "expected number in exponent");
      double v = num.number;
      if (match_op('/')) {
        Token den = lex_.take();
        if (den.kind != Token::Kind::Number) fail(den, "expected denominator in exponent");
        if (den.number == 0.0) throw ParseError("zero denominator in exponent", den.pos);
        v /= den.number;
      }
      expect_op(')', "expected ')' after exponent");
      return v;
    }
    fail(t, "expected numeric exponent");
  }

  Expr parse_base() {
    Token t = lex_.take();
    if (t.kind == Token::Kind::Number) return with_pos(expr::constant(t.number), t.pos);
    if (t.kind == Token::Kind::Op && t.op == '-')
      return with_pos(expr::neg(parse_base()), t.pos);
    if (t.kind == Token::Kind::Op && t.op == '(') {
      Expr e = parse_sum();
      expect_op(')', "expected ')'");
      return e;
    }
    if (t.kind == Token::Kind::Ident) {
      if (lex_.peek().kind == Token::Kind::Op && lex_.peek().op == '(') {
        UnaryFn fn;
        if (t.ident == "exp") fn = UnaryFn::Exp;
        else if (t.ident == "log") fn = UnaryFn::Log;
        else if (t.ident == "sin") fn = UnaryFn::Sin;
        else if (t.ident == "cos") fn = UnaryFn::Cos;
        else if (t.ident == "sinh") fn = UnaryFn::Sinh;
        else if (t.ident == "cosh") fn = UnaryFn::Cosh;
        else if (t.ident == "sqrt") fn = UnaryFn::Sqrt;
        else fail(t, "unknown function '" + t.ident + "'");
        lex_.take();  // '('
        Expr arg = parse_sum();
        expect_op(')', "expected ')' after function argument");
        return with_pos(expr::unary(fn, arg), t.pos);
      }
      int v = vars_.lookup_var(t.ident);
      if (v >= 0) return with_pos(expr::variable(v), t.pos);
      auto it = vars_.constants.find(t.ident);
      if (it != vars_.constants.end()) return with_pos(expr::constant(it->second), t.pos);
      fail(t, "unknown identifier '" + t.ident + "'");
    }
    fail(t, "expected number, identifier, or '('");
  }

  static Expr with_pos(Expr e, std::size_t pos) {
    ExprNode n = *e;
    n.src_pos = pos;
    return std::make_shared<const ExprNode>(std::move(n));
  }

  Lexer lex_;
  const VarTable& vars_;
};

[[noreturn]] void eval_fail(const ExprNode& node, const std::string& reason) {
  std::ostringstream os;
  os << reason << " (node at position " << node.src_pos << ")";
  throw EvalError(os.str());
}

}  // namespace

Expr parse_expr(std::string_view text, const VarTable& vars) {
  if (text.empty()) throw ParseError("empty expression", 0);
  for (std::size_t i = 0; i < vars.names.size(); ++i)
    for (std::size_t j = i + 1; j < vars.names.size(); ++j)
      if (vars.names[i] == vars.names[j])
        throw ParseError("duplicate variable name '" + vars.names[i] + "'", 0);
  return Parser(text, vars).parse();
}

Expr parse_expr(std::string_view text, const std::vector<std::string>& var_names,
                const std::map<std::string, double>& constants) {
  VarTable vt;
  vt.names = var_names;
  vt.constants = constants;
  return parse_expr(text, vt);
}

double eval(const Expr& e, std::span<const double> point) {
  switch (e->kind) {
    case ExprNode::Kind::Constant:
      return e->value;
    case ExprNode::Kind::Variable:
      if (e->var >= static_cast<int>(point.size()))
        eval_fail(*e, "variable index exceeds point dimension");
      return point[e->var];
    case ExprNode::Kind::Unary: {
      double a = eval(e->lhs, point);
      switch (e->fn) {
        case UnaryFn::Neg: return -a;
        case UnaryFn::Exp: return std::exp(a);
        case UnaryFn::Log:
          if (a <= 0.0) eval_fail(*e, "log of non-positive value");
          return std::log(a);
        case UnaryFn::Sin: return std::sin(a);
        case UnaryFn::Cos: return std::cos(a);
        case UnaryFn::Sinh: return std::sinh(a);
        case UnaryFn::Cosh: return std::cosh(a);
        case UnaryFn::Sqrt:
          if (a <= 0.0) eval_fail(*e, "sqrt of non-positive value");
          return std::sqrt(a);
      }
      eval_fail(*e, "bad unary node");
    }
    case ExprNode::Kind::Binary: {
      double a = eval(e->lhs, point);
      double b = eval(e->rhs, point);
      switch (e->op) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div:
          if (b == 0.0) eval_fail(*e, "division by zero");
          return a / b;
      }
      eval_fail(*e, "bad binary node");
    }
    case ExprNode::Kind::Pow: {
      double a = eval(e->lhs, point);
      double ip;
      if (std::modf(e->exponent, &ip) == 0.0) {
        if (a == 0.0 && e->exponent < 0.0) eval_fail(*e, "division by zero");
        return std::pow(a, e->exponent);
      }
      if (a <= 0.0) eval_fail(*e, "non-integer power of non-positive base");
      return std::pow(a, e->exponent);
    }
  }
  eval_fail(*e, "bad node");
}

namespace {

Jet jet_eval_node(const ExprNode& e, const JetLayout& L, std::span<const double> point) {
  Jet out;
  switch (e.kind) {
    case ExprNode::Kind::Constant:
      out = Jet::constant(L, e.value);
      break;
    case ExprNode::Kind::Variable:
      if (e.var >= static_cast<int>(point.size()))
        eval_fail(e, "variable index exceeds point dimension");
      out = Jet::variable(L, e.var, point[e.var]);
      break;
    case ExprNode::Kind::Unary: {
      Jet a = jet_eval_node(*e.lhs, L, point);
      try {
        switch (e.fn) {
          case UnaryFn::Neg: out = -a; break;
          case UnaryFn::Exp: out = exp(a); break;
          case UnaryFn::Log: out = log(a); break;
          case UnaryFn::Sin: out = sin(a); break;
          case UnaryFn::Cos: out = cos(a); break;
          case UnaryFn::Sinh: out = sinh(a); break;
          case UnaryFn::Cosh: out = cosh(a); break;
          case UnaryFn::Sqrt: out = sqrt(a); break;
        }
      } catch (const EvalError& err) {
        eval_fail(e, err.what());
      }
      break;
    }
    case ExprNode::Kind::Binary: {
      Jet a = jet_eval_node(*e.lhs, L, point);
      Jet b = jet_eval_node(*e.rhs, L, point);
      try {
        switch (e.op) {
          case BinaryOp::Add: out = a + b; break;
          case BinaryOp::Sub: out = a - b; break;
          case BinaryOp::Mul: out = a * b; break;
          case BinaryOp::Div: out = a / b; break;
        }
      } catch (const EvalError& err) {
        eval_fail(e, err.what());
      }
      break;
    }
    case ExprNode::Kind::Pow: {
      Jet a = jet_eval_node(*e.lhs, L, point);
      try {
        out = pow(a, e.exponent);
      } catch (const EvalError& err) {
        eval_fail(e, err.what());
      }
      break;
    }
  }
  if (!out.all_finite()) eval_fail(e, "non-finite result");
  return out;
}

}  // namespace

Jet jet_eval(const Expr& e, std::span<const double> point, int order) {
  const JetLayout& L = JetLayout::get(static_cast<int>(point.size()), order);
  return jet_eval_node(*e, L, point);
}

}  // namespace grw
