#pragma once

// Hamiltonian-side residuals, evaluated on Im(s): p is replaced by s(x, u).
//
// Index layouts (zero based):
//   G[A][j][i]            flat (A * m + j) * m + i
//   gen HJ R[B][j][k]     flat (B * m + j) * m + k
//   closedness 2 [A][B][i] flat (A * n + B) * m + i

#include "mshj/fields.hpp"
#include "mshj/lag_residuals.hpp"
#include "mshj/legendre.hpp"
#include "mshj/report.hpp"

namespace mshj {

class HamCoefficients {
 public:
  static HamCoefficients expressions(Dimensions d, std::vector<Expr> flat);
  static HamCoefficients zero(Dimensions d);
  static HamCoefficients induced(Dimensions d);  // G_{B,j}^k = d s_B^k / dx^j
  static HamCoefficients solved(Dimensions d);   // m = 1: G_A = -dH/du^A

  CoefficientKind kind() const { return kind_; }
  Dimensions dims() const { return dims_; }

  /// Values at a momentum point; `s` is the candidate jet (Induced).
  Vector values(const Hamiltonian& h, const RestrictedMomentumPoint& mpt, const FieldJet* s) const;
  /// d G / d(x, u, p): (n m m) x (m + n + nm). Induced needs an order-2 `s`.
  Matrix derivatives(const Hamiltonian& h, const RestrictedMomentumPoint& mpt, const FieldJet* s) const;

 private:
  CoefficientKind kind_ = CoefficientKind::Induced;
  Dimensions dims_;
  std::vector<CompiledExpr> compiled_;
};

/// R_A = sum_i G_{A,i}^i + dH/du^A.
Vector hdw_residual(const Hamiltonian& h, const HamCoefficients& G, const RestrictedMomentumPoint& mpt,
                    const FieldJet* s = nullptr);

struct HamIntegrability {
  IndexedFamily mixed;    // second derivatives of H, (A, j < k)
  IndexedFamily bracket;  // derivatives of G, (A, i, j < k)
};

HamIntegrability integrability_residual_ham(const Hamiltonian& h, const HamCoefficients& G,
                                            const RestrictedMomentumPoint& mpt, const FieldJet* s = nullptr);

/// R_{B,j}^k = d s_B^k/dx^j + dH/dp_A^j d s_B^k/du^A - G_{B,j}^k at p = s(x, u).
Vector gen_ham_hj_residual(const Hamiltonian& h, const FieldJet& s, const HamCoefficients& G, const Vector& x,
                           const Vector& u);
Vector gen_ham_hj_residual(const Hamiltonian& h, const SectionFunction& s, const HamCoefficients& G,
                           const Vector& x, const Vector& u);

/// family1[A] = dH/du^A + dH/dp_B^j d s_B^j/du^A + d s_A^i/dx^i;
/// family2[A][B][i] = d s_A^i/du^B - d s_B^i/du^A (antisymmetric: A < B only).
struct HamClosedness {
  Vector family1;
  Vector family2;
  Vector family2_antisymmetric;
};

HamClosedness ham_closedness_residual(const Hamiltonian& h, const FieldJet& s, const Vector& x, const Vector& u);
HamClosedness ham_closedness_residual(const Hamiltonian& h, const SectionFunction& s, const Vector& x,
                                      const Vector& u);

/// d W^i/dx^i + H(x, u, p) with p_A^i = d W^i/du^A.
double classic_hj_residual(const Hamiltonian& h, const FieldJet& W, const Vector& x, const Vector& u);
double classic_hj_residual(const Hamiltonian& h, const SectionFunction& W, const Vector& x, const Vector& u);

struct HamiltonianCandidate {
  FieldPtr s;
  FieldPtr W;
  HamCoefficients G = HamCoefficients::induced(Dimensions{});
};

PointResiduals hamiltonian_suite(const Hamiltonian& h, const HamiltonianCandidate& c, Suite suite, const Vector& x,
                                 const Vector& u);

PointEvaluator hamiltonian_evaluator(HamiltonianPtr h, HamiltonianCandidate c, Suite suite);

}  // namespace mshj
