#pragma once

// Arithmetic expressions over named coordinates.
//
// Grammar (highest precedence first):
//   primary := number | identifier | identifier '(' expr ')' | '(' expr ')'
//   power   := primary [ '^' unary ]          (right associative)
//   unary   := '-' unary | power
//   term    := unary { ('*' | '/') unary }
//   expr    := term { ('+' | '-') term }
//
// so "-2^2" is -(2^2) and "2^3^2" is 2^9. Constants in a tree are never
// negative: a leading minus is always a Neg node, which keeps printing and
// re-parsing structurally exact.

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "mshj/dual.hpp"
#include "mshj/errors.hpp"

namespace mshj {

enum class UnaryOp { Neg, Sin, Cos, Tan, Exp, Log, Sqrt, Abs, Asin, Atan };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

/// Names accepted in call syntax f(expr).
const std::vector<std::string>& function_names();

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Constant {
  double value;
};
struct Variable {
  std::string name;
};
struct Unary {
  UnaryOp op;
  NodePtr arg;
};
struct Binary {
  BinaryOp op;
  NodePtr lhs;
  NodePtr rhs;
};

struct Node {
  std::variant<Constant, Variable, Unary, Binary> data;
};

/// Immutable expression tree. Cheap to copy (shared structure).
class Expr {
 public:
  Expr() : Expr(constant(0.0)) {}

  static Expr parse(std::string_view text);

  static Expr constant(double value);
  static Expr variable(std::string name);
  static Expr unary(UnaryOp op, const Expr& arg);
  static Expr binary(BinaryOp op, const Expr& lhs, const Expr& rhs);

  const Node& node() const { return *root_; }
  const NodePtr& root() const { return root_; }

  /// Minimal-parenthesis printed form; parse(str()) == *this.
  std::string str() const;

  /// Sorted, de-duplicated variable names.
  std::vector<std::string> variables() const;

  /// Returns a copy with variables renamed through `mapping` (others kept).
  Expr renamed(const std::map<std::string, std::string>& mapping) const;

  /// Returns a copy with the named variables replaced by subtrees.
  Expr substituted(const std::map<std::string, Expr>& replacements) const;

  bool is_constant_value() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(NodePtr root) : root_(std::move(root)) {}
  NodePtr root_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

/// Map from identifier to value.
using Binding = std::map<std::string, double, std::less<>>;

/// Value, gradient and (order 2) Hessian with respect to a list of variables.
struct Derivatives {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;  // empty for order 1
};

/// An expression lowered to a postfix program whose variables are resolved
/// against a fixed slot layout. Evaluation is pure and thread-safe.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  /// Throws UnboundVariable if `expr` names a variable not in `slots`.
  CompiledExpr(const Expr& expr, std::span<const std::string> slots);

  std::size_t slot_count() const { return slot_count_; }
  const std::string& source() const { return source_; }

  double eval(std::span<const double> point) const;

  /// Gradient over all slots via one dual pass per slot.
  Derivatives gradient(std::span<const double> point) const;

  /// Gradient and Hessian over all slots via nested duals; the Hessian is
  /// symmetric by construction (each off-diagonal entry computed once).
  Derivatives hessian(std::span<const double> point) const;

  /// Derivatives restricted to the slot indices in `which`.
  Derivatives derive(std::span<const double> point, std::span<const int> which, int order) const;

  template <typename S>
  S run(std::span<const S> point) const;

  enum class Code : unsigned char {
    Const, Var, Neg, Sin, Cos, Tan, Exp, Log, Sqrt, Abs, Asin, Atan,
    Add, Sub, Mul, Div, Pow, PowInt
  };
  struct Instr {
    Code code;
    int index;     // slot for Var, exponent for PowInt, node id for domain reports
    double value;  // constant for Const
  };

 private:
  std::vector<Instr> program_;
  std::vector<std::string> subexpr_;  // printed subtrees for domain diagnostics
  std::size_t slot_count_ = 0;
  std::size_t max_stack_ = 0;
  std::string source_;

  [[noreturn]] void domain_fail(int node, const char* what) const;
};

double eval(const Expr& expr, const Binding& env);

/// Forward-mode derivatives of `expr` at `env` w.r.t. `vars` (order 1 or 2).
Derivatives derive(const Expr& expr, const Binding& env, std::span<const std::string> vars, int order);

}  // namespace mshj
