#pragma once

// Lagrangian-side residuals. Every residual is evaluated on Im(Psi): the jet
// coordinates v are replaced by psi(x, u) before L or F is evaluated.
//
// Index layouts (zero based):
//   F[j][i][A]          flat (j * m + i) * n + A
//   gen HJ R[j][k][B]   flat (j * m + k) * n + B
//   isotropy A[A][B][i] flat (A * n + B) * m + i

#include <string>
#include <vector>

#include "mshj/fields.hpp"
#include "mshj/report.hpp"

namespace mshj {

/// How the multivector coefficient functions F_{j,i}^A are obtained.
enum class CoefficientKind {
  Expression,  // explicit expressions over (x, u, v)
  Induced,     // F_{j,k}^A = d psi_k^A / dx^j of the candidate on Im(Psi)
  Solved,      // m = 1 only: the unique solution of the Euler-Lagrange equations
};

class LagCoefficients {
 public:
  static LagCoefficients expressions(Dimensions d, std::vector<Expr> flat);
  static LagCoefficients zero(Dimensions d);
  static LagCoefficients induced(Dimensions d);
  static LagCoefficients solved(Dimensions d);

  CoefficientKind kind() const { return kind_; }
  Dimensions dims() const { return dims_; }
  std::size_t size() const { return static_cast<std::size_t>(dims_.m * dims_.m * dims_.n); }
  int flat(int j, int i, int alpha) const { return (j * dims_.m + i) * dims_.n + alpha; }

  /// Values at a jet point. `psi` is the candidate jet at (x, u) (order >= 1),
  /// required for Induced.
  Vector values(const FieldTheory& theory, const JetPoint& pt, const FieldJet* psi) const;

  /// d F / d(x, u, v): size() x (m + n + nm). Induced needs an order-2 `psi`.
  Matrix derivatives(const FieldTheory& theory, const JetPoint& pt, const FieldJet* psi) const;

 private:
  CoefficientKind kind_ = CoefficientKind::Induced;
  Dimensions dims_;
  std::vector<Expr> exprs_;
  std::vector<CompiledExpr> compiled_;
};

/// R_A = L_{u^A} - L_{v_i^A x^i} - v_i^B L_{v_i^A u^B} - F_{j,i}^B L_{v_i^A v_j^B}.
Vector el_coefficient_residual(const FieldTheory& theory, const LagCoefficients& F, const JetPoint& pt,
                               const FieldJet* psi = nullptr);

struct IndexedFamily {
  Vector values;
  std::vector<std::string> labels;
};

struct LagIntegrability {
  IndexedFamily antisymmetry;  // F_{j,k}^A - F_{k,j}^A, j < k
  IndexedFamily bracket;       // [X_j, X_k] components along d/dv_i^A, j < k
};

LagIntegrability integrability_residual_lag(const LagCoefficients& F, const FieldTheory& theory, const JetPoint& pt,
                                            const FieldJet* psi = nullptr);

/// R_{j,k}^B = d psi_k^B/dx^j + psi_j^A d psi_k^B/du^A - F_{j,k}^B(x, u, psi).
Vector gen_lag_hj_residual(const FieldTheory& theory, const FieldJet& psi, const LagCoefficients& F,
                           const Vector& x, const Vector& u);
Vector gen_lag_hj_residual(const FieldTheory& theory, const SectionFunction& psi, const LagCoefficients& F,
                           const Vector& x, const Vector& u);

/// Isotropy of Im(Psi). With P_A^i = L_{v_i^A} o Psi:
///   a_full[A][B][i]  = d P_A^i / du^B
///   a_antisymmetric  = a_full[A][B][i] - a_full[B][A][i], A < B
///   b_combined[A]    = L_{v_i^A v_k^B} d psi_k^B / dx^i - L_{u^A}
///   b_pullback[B]    = d P_B^i / dx^i + psi_i^A d P_A^i / du^B - L_{u^B}
/// Psi^* Omega_L = 0 iff a_antisymmetric and b_pullback vanish.
struct LagIsotropy {
  Vector a_full;
  Vector a_antisymmetric;
  Vector b_combined;
  Vector b_pullback;
};

LagIsotropy lag_isotropy_residual(const FieldTheory& theory, const FieldJet& psi, const Vector& x, const Vector& u);
LagIsotropy lag_isotropy_residual(const FieldTheory& theory, const SectionFunction& psi, const Vector& x,
                                  const Vector& u);

/// scalar = d W^i/dx^i + psi_i^A d W^i/du^A - L(x, u, psi);
/// momentum[A * m + i] = d W^i/du^A - L_{v_i^A}(x, u, psi).
struct LagGenerating {
  double scalar = 0.0;
  Vector momentum;
};

LagGenerating lag_generating_residual(const FieldTheory& theory, const FieldJet& psi, const FieldJet& W,
                                      const Vector& x, const Vector& u);
LagGenerating lag_generating_residual(const FieldTheory& theory, const SectionFunction& psi,
                                      const SectionFunction& W, const Vector& x, const Vector& u);

struct LagrangianCandidate {
  FieldPtr psi;
  FieldPtr W;  // classic suite only
  LagCoefficients F = LagCoefficients::induced(Dimensions{});
};

/// Residual families of one suite at (x, u).
PointResiduals lagrangian_suite(const FieldTheory& theory, const LagrangianCandidate& c, Suite suite,
                                const Vector& x, const Vector& u);

/// Evaluator over (x1..xm, u1..un) grids.
PointEvaluator lagrangian_evaluator(std::shared_ptr<const FieldTheory> theory, LagrangianCandidate c, Suite suite);

}  // namespace mshj
