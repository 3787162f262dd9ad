#pragma once

// Coordinate conventions shared by every residual module.
//
// Base coordinates x1..xm, fiber coordinates u1..un, jet coordinates vA_i
// (the velocity u_i^A) and restricted multimomenta pA_i (p_A^i). Multi-index
// pairs (A, i) are flattened alpha-major: flat = A * m + i (zero based). The
// volume form is always the canonical dx1 ^ ... ^ dxm.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mshj/expr.hpp"

namespace mshj {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct Dimensions {
  int m = 1;  // base dimension
  int n = 1;  // fiber dimension

  int jets() const { return m * n; }
  int flat(int alpha, int i) const { return alpha * m + i; }
  friend bool operator==(const Dimensions&, const Dimensions&) = default;
};

std::string x_name(int i);             // "x1"
std::string u_name(int alpha);         // "u1"
std::string v_name(int alpha, int i);  // "v1_2" : velocity u_2^1
std::string p_name(int alpha, int i);  // "p1_2" : momentum p_1^2

/// Slot layouts used to compile expressions.
std::vector<std::string> base_slots(Dimensions d);      // x, u
std::vector<std::string> jet_slots(Dimensions d);       // x, u, v
std::vector<std::string> momentum_slots(Dimensions d);  // x, u, p

/// Canonical renaming of the accepted aliases: t -> x1 (m = 1); x, y, z ->
/// x1, x2, x3 (m = 2 or 3); q, u -> u1 (n = 1); v -> v1_1, p -> p1_1 (m = n = 1).
std::map<std::string, std::string> coordinate_aliases(Dimensions d);

/// Parses `text`, applies the coordinate aliases and checks that every
/// variable is one of `allowed`. Throws ConfigError naming the stray variable.
Expr parse_in(std::string_view text, Dimensions d, std::span<const std::string> allowed);

struct JetPoint {
  Vector x;
  Vector u;
  Matrix v;  // n x m, v(A, i) = u_i^A

  static JetPoint zeros(Dimensions d);
  std::vector<double> slots() const;  // x, u, v (alpha-major)
};

struct RestrictedMomentumPoint {
  Vector x;
  Vector u;
  Matrix p;  // n x m, p(A, i) = p_A^i

  static RestrictedMomentumPoint zeros(Dimensions d);
  std::vector<double> slots() const;
};

struct ExtendedMomentumPoint {
  RestrictedMomentumPoint restricted;
  double p0 = 0.0;
};

/// Flattens an n x m block alpha-major.
Vector flatten(const Matrix& block);
Matrix unflatten(const Vector& flat, Dimensions d);

/// Value and derivatives of L at a jet point, split into coordinate blocks.
/// Indices of the v blocks are alpha-major flat indices.
struct LagrangianJet {
  double value = 0.0;
  Vector dx, du, dv;
  Matrix vv;  // (nm x nm)
  Matrix vx;  // (nm x m)
  Matrix vu;  // (nm x n)
};

/// First-order field theory: dimensions and a Lagrangian function L(x,u,v).
class FieldTheory {
 public:
  FieldTheory(Dimensions dims, Expr lagrangian);
  /// Parses the Lagrangian text (aliases allowed).
  FieldTheory(Dimensions dims, std::string_view lagrangian);

  Dimensions dims() const { return dims_; }
  const Expr& lagrangian() const { return expr_; }

  double value(const JetPoint& pt) const;
  LagrangianJet jet(const JetPoint& pt, int order) const;

 private:
  Dimensions dims_;
  Expr expr_;
  CompiledExpr compiled_;
};

/// Second derivatives d2L / dv(A,i) dv(B,j), alpha-major, symmetric.
Matrix hessian(const FieldTheory& theory, const JetPoint& pt);

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

struct Axis {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 1;

  /// Sample k of this axis; a single sample sits at the midpoint.
  double at(std::size_t k) const;
};

struct GridSpec {
  static constexpr std::size_t kDefaultCap = 10'000'000;

  std::vector<Axis> axes;
  std::size_t cap = kDefaultCap;

  /// Product of counts; throws CapExceeded when above the cap.
  std::size_t size() const;
  /// Row-major (last axis fastest) point `index`, written into `out`.
  void point(std::size_t index, std::span<double> out) const;
  /// Validates the axes (lo <= hi, count >= 1); throws InvalidParams.
  void validate() const;
  GridSpec scaled(std::size_t factor) const;
};

/// Deterministic row-major enumeration of every grid point.
std::vector<std::vector<double>> grid_points(const GridSpec& grid);

struct RegularityReport {
  double min_abs_det = 0.0;
  std::vector<double> argmin;  // grid point (x, u, v) of the minimum
  std::size_t points = 0;
  bool regular = false;
};

/// Scans |det Hessian| over a grid covering (x, u, v) in jet_slots order.
RegularityReport regularity_check(const FieldTheory& theory, const GridSpec& grid, double tol);

JetPoint jet_point_from_slots(Dimensions d, std::span<const double> slots);

}  // namespace mshj
