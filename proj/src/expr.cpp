#include "mshj/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <system_error>

namespace mshj {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

namespace {

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k) out += sep;
    out += items[k];
  }
  return out;
}

}  // namespace

SyntaxError::SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& detail)
    : InputError("syntax error at byte " + std::to_string(offset) + ": " + detail +
                 (expected.empty() ? std::string() : " (expected " + join(expected, ", ") + ")")),
      offset_(offset),
      expected_(std::move(expected)) {}

UnknownFunction::UnknownFunction(std::string name, std::size_t offset)
    : InputError("unknown function '" + name + "' at byte " + std::to_string(offset)),
      name_(std::move(name)),
      offset_(offset) {}

UnboundVariable::UnboundVariable(std::string name)
    : InputError("unbound variable '" + name + "'"), name_(std::move(name)) {}

CapExceeded::CapExceeded(std::size_t requested, std::size_t cap)
    : InputError("grid has " + std::to_string(requested) + " points, cap is " + std::to_string(cap)) {}

DomainError::DomainError(const std::string& what, std::string subexpression)
    : NumericalError(subexpression.empty() ? what : what + " in '" + subexpression + "'"),
      subexpression_(std::move(subexpression)) {}

PointFailure::PointFailure(std::vector<double> point, const std::string& cause, bool input_error)
    : NumericalError(cause), point_(std::move(point)), input_error_(input_error) {}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

namespace {

struct FunctionEntry {
  const char* name;
  UnaryOp op;
};

constexpr FunctionEntry kFunctions[] = {
    {"sin", UnaryOp::Sin},   {"cos", UnaryOp::Cos},   {"tan", UnaryOp::Tan},
    {"exp", UnaryOp::Exp},   {"log", UnaryOp::Log},   {"sqrt", UnaryOp::Sqrt},
    {"abs", UnaryOp::Abs},   {"asin", UnaryOp::Asin}, {"atan", UnaryOp::Atan},
};

const char* function_name(UnaryOp op) {
  for (const auto& f : kFunctions)
    if (f.op == op) return f.name;
  return "-";
}

NodePtr make(Node node) { return std::make_shared<const Node>(std::move(node)); }

}  // namespace

const std::vector<std::string>& function_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& f : kFunctions) out.emplace_back(f.name);
    return out;
  }();
  return names;
}

Expr Expr::constant(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite constant");
  if (value == 0.0) return Expr(make(Node{Constant{0.0}}));
  if (value < 0.0) return Expr(make(Node{Unary{UnaryOp::Neg, make(Node{Constant{-value}})}}));
  return Expr(make(Node{Constant{value}}));
}

Expr Expr::variable(std::string name) { return Expr(make(Node{Variable{std::move(name)}})); }

Expr Expr::unary(UnaryOp op, const Expr& arg) { return Expr(make(Node{Unary{op, arg.root_}})); }

Expr Expr::binary(BinaryOp op, const Expr& lhs, const Expr& rhs) {
  return Expr(make(Node{Binary{op, lhs.root_, rhs.root_}}));
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::Div, a, b); }
Expr operator-(const Expr& a) { return Expr::unary(UnaryOp::Neg, a); }

// ---------------------------------------------------------------------------
// Structure queries
// ---------------------------------------------------------------------------

namespace {

bool equal_nodes(const Node& a, const Node& b) {
  if (a.data.index() != b.data.index()) return false;
  if (auto* c = std::get_if<Constant>(&a.data)) return c->value == std::get<Constant>(b.data).value;
  if (auto* v = std::get_if<Variable>(&a.data)) return v->name == std::get<Variable>(b.data).name;
  if (auto* u = std::get_if<Unary>(&a.data)) {
    const auto& w = std::get<Unary>(b.data);
    return u->op == w.op && equal_nodes(*u->arg, *w.arg);
  }
  const auto& x = std::get<Binary>(a.data);
  const auto& y = std::get<Binary>(b.data);
  return x.op == y.op && equal_nodes(*x.lhs, *y.lhs) && equal_nodes(*x.rhs, *y.rhs);
}

void collect_variables(const Node& n, std::set<std::string>& out) {
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Variable>) {
          out.insert(d.name);
        } else if constexpr (std::is_same_v<T, Unary>) {
          collect_variables(*d.arg, out);
        } else if constexpr (std::is_same_v<T, Binary>) {
          collect_variables(*d.lhs, out);
          collect_variables(*d.rhs, out);
        }
      },
      n.data);
}

template <typename Leaf>
NodePtr rewrite(const NodePtr& n, const Leaf& leaf) {
  if (auto* v = std::get_if<Variable>(&n->data)) return leaf(*v, n);
  if (auto* u = std::get_if<Unary>(&n->data)) {
    auto arg = rewrite(u->arg, leaf);
    return arg == u->arg ? n : make(Node{Unary{u->op, arg}});
  }
  if (auto* b = std::get_if<Binary>(&n->data)) {
    auto l = rewrite(b->lhs, leaf);
    auto r = rewrite(b->rhs, leaf);
    return (l == b->lhs && r == b->rhs) ? n : make(Node{Binary{b->op, l, r}});
  }
  return n;
}

}  // namespace

bool operator==(const Expr& a, const Expr& b) { return equal_nodes(*a.root_, *b.root_); }

std::vector<std::string> Expr::variables() const {
  std::set<std::string> names;
  collect_variables(*root_, names);
  return {names.begin(), names.end()};
}

Expr Expr::renamed(const std::map<std::string, std::string>& mapping) const {
  return Expr(rewrite(root_, [&](const Variable& v, const NodePtr& self) -> NodePtr {
    auto it = mapping.find(v.name);
    return it == mapping.end() ? self : make(Node{Variable{it->second}});
  }));
}

Expr Expr::substituted(const std::map<std::string, Expr>& replacements) const {
  return Expr(rewrite(root_, [&](const Variable& v, const NodePtr& self) -> NodePtr {
    auto it = replacements.find(v.name);
    return it == replacements.end() ? self : it->second.root_;
  }));
}

bool Expr::is_constant_value() const { return variables().empty(); }

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

// 1: + -, 2: * /, 3: unary minus, 4: ^, 5: primary
int precedence(const Node& n) {
  if (auto* u = std::get_if<Unary>(&n.data)) return u->op == UnaryOp::Neg ? 3 : 5;
  if (auto* b = std::get_if<Binary>(&n.data)) {
    switch (b->op) {
      case BinaryOp::Add:
      case BinaryOp::Sub: return 1;
      case BinaryOp::Mul:
      case BinaryOp::Div: return 2;
      case BinaryOp::Pow: return 4;
    }
  }
  return 5;
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void print(const Node& n, std::string& out);

void print_wrapped(const Node& n, bool parens, std::string& out) {
  if (parens) out += '(';
  print(n, out);
  if (parens) out += ')';
}

void print(const Node& n, std::string& out) {
  if (auto* c = std::get_if<Constant>(&n.data)) {
    out += format_number(c->value);
  } else if (auto* v = std::get_if<Variable>(&n.data)) {
    out += v->name;
  } else if (auto* u = std::get_if<Unary>(&n.data)) {
    if (u->op == UnaryOp::Neg) {
      out += '-';
      print_wrapped(*u->arg, precedence(*u->arg) < 3, out);
    } else {
      out += function_name(u->op);
      print_wrapped(*u->arg, true, out);
    }
  } else {
    const auto& b = std::get<Binary>(n.data);
    int pl = precedence(*b.lhs);
    int pr = precedence(*b.rhs);
    switch (b.op) {
      case BinaryOp::Add:
      case BinaryOp::Sub:
        print_wrapped(*b.lhs, false, out);
        out += b.op == BinaryOp::Add ? '+' : '-';
        print_wrapped(*b.rhs, pr <= 1, out);
        break;
      case BinaryOp::Mul:
      case BinaryOp::Div:
        print_wrapped(*b.lhs, pl < 2, out);
        out += b.op == BinaryOp::Mul ? '*' : '/';
        print_wrapped(*b.rhs, pr <= 2, out);
        break;
      case BinaryOp::Pow:
        print_wrapped(*b.lhs, pl < 5, out);
        out += '^';
        print_wrapped(*b.rhs, pr < 3, out);
        break;
    }
  }
}

}  // namespace

std::string Expr::str() const {
  std::string out;
  print(*root_, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    Expr e = expression();
    skip_ws();
    if (pos_ != text_.size()) fail({"operator", "end of input"}, "unexpected character");
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(std::vector<std::string> expected, const std::string& detail) {
    throw SyntaxError(pos_, std::move(expected), detail);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expression() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + term();
      } else if (accept('-')) {
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * unary();
      } else if (accept('/')) {
        lhs = lhs / unary();
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) return Expr::binary(BinaryOp::Pow, base, unary());
    return base;
  }

  Expr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail({"number", "identifier", "(", "-"}, "unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = expression();
      if (!accept(')')) fail({")"}, "unbalanced parenthesis");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail({"number", "identifier", "(", "-"}, std::string("unexpected character '") + c + "'");
  }

  Expr number() {
    std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) {
      pos_ = start;
      fail({"digit"}, "malformed number");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail({"digit"}, "malformed exponent");
    }
    double value = 0.0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc() || !std::isfinite(value)) {
      pos_ = start;
      fail({"finite number"}, "number out of range");
    }
    return Expr::constant(value);
  }

  Expr identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    std::size_t after = pos_;
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      for (const auto& f : kFunctions) {
        if (name == f.name) {
          ++pos_;
          Expr arg = expression();
          if (!accept(')')) fail({")"}, "unterminated call to " + name);
          return Expr::unary(f.op, arg);
        }
      }
      throw UnknownFunction(name, start);
    }
    pos_ = after;
    return Expr::variable(std::move(name));
  }
};

}  // namespace

Expr Expr::parse(std::string_view text) { return Parser(text).parse_all(); }

// ---------------------------------------------------------------------------
// Compilation
// ---------------------------------------------------------------------------

namespace {

using Code = CompiledExpr::Code;
using Instr = CompiledExpr::Instr;

struct Lowering {
  std::span<const std::string> slots;
  std::vector<Instr> program;
  std::vector<std::string> subexpr;
  std::size_t depth = 0;
  std::size_t max_depth = 0;

  void push() { max_depth = std::max(max_depth, ++depth); }

  int remember(const Node& n) {
    std::string s;
    print(n, s);
    subexpr.push_back(std::move(s));
    return static_cast<int>(subexpr.size() - 1);
  }

  void lower(const Node& n) {
    if (auto* c = std::get_if<Constant>(&n.data)) {
      program.push_back({Code::Const, 0, c->value});
      push();
    } else if (auto* v = std::get_if<Variable>(&n.data)) {
      auto it = std::find(slots.begin(), slots.end(), v->name);
      if (it == slots.end()) throw UnboundVariable(v->name);
      program.push_back({Code::Var, static_cast<int>(it - slots.begin()), 0.0});
      push();
    } else if (auto* u = std::get_if<Unary>(&n.data)) {
      lower(*u->arg);
      Code code = Code::Neg;
      int id = 0;
      switch (u->op) {
        case UnaryOp::Neg: code = Code::Neg; break;
        case UnaryOp::Sin: code = Code::Sin; break;
        case UnaryOp::Cos: code = Code::Cos; break;
        case UnaryOp::Tan: code = Code::Tan; break;
        case UnaryOp::Exp: code = Code::Exp; break;
        case UnaryOp::Abs: code = Code::Abs; break;
        case UnaryOp::Atan: code = Code::Atan; break;
        case UnaryOp::Log: code = Code::Log; id = remember(n); break;
        case UnaryOp::Sqrt: code = Code::Sqrt; id = remember(n); break;
        case UnaryOp::Asin: code = Code::Asin; id = remember(n); break;
      }
      program.push_back({code, id, 0.0});
    } else {
      const auto& b = std::get<Binary>(n.data);
      if (b.op == BinaryOp::Pow) {
        if (auto* k = std::get_if<Constant>(&b.rhs->data);
            k && k->value == std::floor(k->value) && k->value <= 64.0) {
          lower(*b.lhs);
          int id = remember(n);
          program.push_back({Code::PowInt, id, k->value});
          return;
        }
      }
      lower(*b.lhs);
      lower(*b.rhs);
      --depth;
      Code code = Code::Add;
      int id = 0;
      switch (b.op) {
        case BinaryOp::Add: code = Code::Add; break;
        case BinaryOp::Sub: code = Code::Sub; break;
        case BinaryOp::Mul: code = Code::Mul; break;
        case BinaryOp::Div: code = Code::Div; id = remember(n); break;
        case BinaryOp::Pow: code = Code::Pow; id = remember(n); break;
      }
      program.push_back({code, id, 0.0});
    }
  }
};

template <typename S>
S int_power(S base, long k) {
  S result(1.0);
  while (k > 0) {
    if (k & 1) result = result * base;
    base = base * base;
    k >>= 1;
  }
  return result;
}

}  // namespace

CompiledExpr::CompiledExpr(const Expr& expr, std::span<const std::string> slots)
    : slot_count_(slots.size()), source_(expr.str()) {
  Lowering l{slots, {}, {}, 0, 0};
  l.lower(expr.node());
  program_ = std::move(l.program);
  subexpr_ = std::move(l.subexpr);
  max_stack_ = l.max_depth;
}

void CompiledExpr::domain_fail(int node, const char* what) const {
  throw DomainError(what, node >= 0 && node < static_cast<int>(subexpr_.size()) ? subexpr_[node] : source_);
}

template <typename S>
S CompiledExpr::run(std::span<const S> point) const {
  using std::abs, std::asin, std::atan, std::cos, std::exp, std::log, std::pow, std::sin, std::sqrt,
      std::tan;
  constexpr bool kDual = is_dual<S>::value;
  S stack_buf[32]{};
  std::vector<S> heap;
  S* stack = stack_buf;
  if (max_stack_ > 32) {
    heap.resize(max_stack_);
    stack = heap.data();
  }
  std::size_t sp = 0;
  for (const Instr& in : program_) {
    switch (in.code) {
      case Code::Const: stack[sp++] = S(in.value); break;
      case Code::Var: stack[sp++] = point[in.index]; break;
      case Code::Neg: stack[sp - 1] = -stack[sp - 1]; break;
      case Code::Sin: stack[sp - 1] = sin(stack[sp - 1]); break;
      case Code::Cos: stack[sp - 1] = cos(stack[sp - 1]); break;
      case Code::Tan: stack[sp - 1] = tan(stack[sp - 1]); break;
      case Code::Exp: stack[sp - 1] = exp(stack[sp - 1]); break;
      case Code::Abs: stack[sp - 1] = abs(stack[sp - 1]); break;
      case Code::Atan: stack[sp - 1] = atan(stack[sp - 1]); break;
      case Code::Log:
        if (!(primal(stack[sp - 1]) > 0.0)) domain_fail(in.index, "log of non-positive value");
        stack[sp - 1] = log(stack[sp - 1]);
        break;
      case Code::Sqrt: {
        double a = primal(stack[sp - 1]);
        if (a < 0.0 || std::isnan(a)) domain_fail(in.index, "sqrt of negative value");
        if (kDual && a == 0.0) domain_fail(in.index, "sqrt not differentiable at 0");
        stack[sp - 1] = sqrt(stack[sp - 1]);
        break;
      }
      case Code::Asin: {
        double a = primal(stack[sp - 1]);
        if (!(std::abs(a) <= 1.0)) domain_fail(in.index, "asin argument outside [-1,1]");
        if (kDual && std::abs(a) == 1.0) domain_fail(in.index, "asin not differentiable at +-1");
        stack[sp - 1] = asin(stack[sp - 1]);
        break;
      }
      case Code::Add: --sp; stack[sp - 1] = stack[sp - 1] + stack[sp]; break;
      case Code::Sub: --sp; stack[sp - 1] = stack[sp - 1] - stack[sp]; break;
      case Code::Mul: --sp; stack[sp - 1] = stack[sp - 1] * stack[sp]; break;
      case Code::Div:
        --sp;
        if (primal(stack[sp]) == 0.0) domain_fail(in.index, "division by zero");
        stack[sp - 1] = stack[sp - 1] / stack[sp];
        break;
      case Code::PowInt: {
        long k = static_cast<long>(in.value);
        if (k >= 0) {
          stack[sp - 1] = int_power(stack[sp - 1], k);
        } else {
          if (primal(stack[sp - 1]) == 0.0) domain_fail(in.index, "negative power of zero");
          stack[sp - 1] = S(1.0) / int_power(stack[sp - 1], -k);
        }
        break;
      }
      case Code::Pow: {
        --sp;
        double base = primal(stack[sp - 1]);
        double expo = primal(stack[sp]);
        if (base > 0.0) {
          stack[sp - 1] = pow(stack[sp - 1], stack[sp]);
        } else if (expo == std::floor(expo) && std::abs(expo) <= 1024.0 && (expo >= 0.0 || base != 0.0)) {
          // Integral exponent value with non-positive base: differentiate in the
          // base only (the exponent derivative involves log of the base).
          long k = static_cast<long>(expo);
          stack[sp - 1] = k >= 0 ? int_power(stack[sp - 1], k) : S(1.0) / int_power(stack[sp - 1], -k);
        } else {
          domain_fail(in.index, "non-integer power of non-positive base");
        }
        break;
      }
    }
  }
  return stack[0];
}

template double CompiledExpr::run<double>(std::span<const double>) const;
template Dual<double> CompiledExpr::run<Dual<double>>(std::span<const Dual<double>>) const;
template Dual<Dual<double>> CompiledExpr::run<Dual<Dual<double>>>(std::span<const Dual<Dual<double>>>) const;

double CompiledExpr::eval(std::span<const double> point) const { return run<double>(point); }

Derivatives CompiledExpr::derive(std::span<const double> point, std::span<const int> which, int order) const {
  const std::size_t k = which.size();
  Derivatives out;
  out.gradient = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
  if (order <= 1) {
    std::vector<Dual<double>> x(point.size());
    for (std::size_t s = 0; s < point.size(); ++s) x[s] = Dual<double>(point[s], 0.0);
    if (k == 0) out.value = eval(point);
    for (std::size_t a = 0; a < k; ++a) {
      x[which[a]].d = 1.0;
      Dual<double> r = run<Dual<double>>(x);
      x[which[a]].d = 0.0;
      out.value = r.v;
      out.gradient[a] = r.d;
    }
    return out;
  }
  using D2 = Dual<Dual<double>>;
  out.hessian = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  std::vector<D2> x(point.size());
  for (std::size_t s = 0; s < point.size(); ++s) x[s] = D2(Dual<double>(point[s], 0.0), Dual<double>(0.0, 0.0));
  if (k == 0) out.value = eval(point);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      x[which[a]].d.v = 1.0;  // outer direction a
      x[which[b]].v.d = 1.0;  // inner direction b
      D2 r = run<D2>(x);
      x[which[a]].d.v = 0.0;
      x[which[b]].v.d = 0.0;
      out.value = r.v.v;
      if (a == b) out.gradient[a] = r.v.d;
      out.hessian(a, b) = r.d.d;
      out.hessian(b, a) = r.d.d;
    }
  }
  return out;
}

Derivatives CompiledExpr::gradient(std::span<const double> point) const {
  std::vector<int> all(point.size());
  for (std::size_t s = 0; s < all.size(); ++s) all[s] = static_cast<int>(s);
  return derive(point, all, 1);
}

Derivatives CompiledExpr::hessian(std::span<const double> point) const {
  std::vector<int> all(point.size());
  for (std::size_t s = 0; s < all.size(); ++s) all[s] = static_cast<int>(s);
  return derive(point, all, 2);
}

// ---------------------------------------------------------------------------
// Binding-based front end
// ---------------------------------------------------------------------------

namespace {

struct BoundPoint {
  std::vector<std::string> names;
  std::vector<double> values;
};

BoundPoint unpack(const Binding& env) {
  BoundPoint b;
  for (const auto& [name, value] : env) {
    b.names.push_back(name);
    b.values.push_back(value);
  }
  return b;
}

}  // namespace

double eval(const Expr& expr, const Binding& env) {
  BoundPoint b = unpack(env);
  return CompiledExpr(expr, b.names).eval(b.values);
}

Derivatives derive(const Expr& expr, const Binding& env, std::span<const std::string> vars, int order) {
  BoundPoint b = unpack(env);
  std::vector<int> which;
  for (const auto& v : vars) {
    auto it = std::find(b.names.begin(), b.names.end(), v);
    if (it == b.names.end()) throw UnboundVariable(v);
    which.push_back(static_cast<int>(it - b.names.begin()));
  }
  return CompiledExpr(expr, b.names).derive(b.values, which, order);
}

}  // namespace mshj
