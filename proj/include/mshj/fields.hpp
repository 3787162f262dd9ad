#pragma once

// Vector-valued functions of the configuration coordinates (x, u): jet fields
// psi, momentum sections s and generating forms W all share this shape.
//
// Component layouts:
//   psi, s : alpha-major, index A * m + i  (psi_i^A, s_A^i)
//   W      : index i                       (W^i)

#include <memory>
#include <string>
#include <vector>

#include "mshj/jet_core.hpp"

namespace mshj {

/// Value and derivatives of a section function at (x, u).
struct FieldJet {
  Vector value;  // K
  Matrix dx;     // K x m
  Matrix du;     // K x n
  /// Order 2 only: one (m+n) x (m+n) Hessian per component, (x, u) order.
  std::vector<Matrix> second;
};

class SectionFunction {
 public:
  virtual ~SectionFunction() = default;

  virtual Dimensions dims() const = 0;
  virtual std::size_t size() const = 0;
  /// order 0: value; 1: + dx, du; 2: + second.
  virtual FieldJet jet(const Vector& x, const Vector& u, int order) const = 0;

  Vector value(const Vector& x, const Vector& u) const { return jet(x, u, 0).value; }
};

using FieldPtr = std::shared_ptr<const SectionFunction>;

/// Components given as expressions over x1..xm, u1..un.
class ExprField final : public SectionFunction {
 public:
  ExprField(Dimensions dims, std::vector<Expr> components);

  Dimensions dims() const override { return dims_; }
  std::size_t size() const override { return compiled_.size(); }
  FieldJet jet(const Vector& x, const Vector& u, int order) const override;

  const std::vector<Expr>& components() const { return exprs_; }

 private:
  Dimensions dims_;
  std::vector<Expr> exprs_;
  std::vector<CompiledExpr> compiled_;
};

/// Parses component strings (aliases allowed, only x and u coordinates).
FieldPtr make_expr_field(Dimensions dims, const std::vector<std::string>& components);
FieldPtr make_expr_field(Dimensions dims, std::vector<Expr> components);

/// Second derivatives by central differences of first-derivative jets; used
/// by composed fields whose second derivatives are not available in closed
/// form. Fills `jet.second` (symmetrized).
void fd_second_derivatives(const SectionFunction& f, const Vector& x, const Vector& u, FieldJet& jet);

inline std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

/// Builds a (x, u) point from a base-slot span.
void split_base_point(Dimensions d, std::span<const double> point, Vector& x, Vector& u);

}  // namespace mshj
