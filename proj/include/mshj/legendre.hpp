#pragma once

#include <memory>
#include <optional>
#include <string>

#include "mshj/jet_core.hpp"

namespace mshj {

struct NewtonSettings {
  enum class Initial { Zero, Provided };

  int max_iter = 50;
  double tol = 1e-12;  // on max |dL/dv - p|
  Initial initial = Initial::Zero;
  Matrix guess;  // n x m, used with Initial::Provided
};

/// p_A^i = dL/dv(A,i); x and u copied.
RestrictedMomentumPoint restricted_legendre(const FieldTheory& theory, const JetPoint& pt);

/// Adds p0 = L - v . dL/dv.
ExtendedMomentumPoint extended_legendre(const FieldTheory& theory, const JetPoint& pt);

struct LegendreSolve {
  JetPoint point;
  int iterations = 0;
  double residual = 0.0;
};

/// Newton iteration on v with the Hessian of L as Jacobian. Steps that
/// increase the residual are halved. Throws SingularJacobian when
/// |det L_vv| < 1e-14 at an iterate, OutOfDomain when the iterates leave every
/// bounded region or L cannot be evaluated there, NonConvergence otherwise.
LegendreSolve solve_legendre(const FieldTheory& theory, const RestrictedMomentumPoint& mpt,
                             const NewtonSettings& settings = {});

JetPoint inverse_legendre(const FieldTheory& theory, const RestrictedMomentumPoint& mpt,
                          const NewtonSettings& settings = {});

/// H and its derivatives at a momentum point. Momentum indices are flat
/// alpha-major (A * m + i).
struct HamiltonianJet {
  double value = 0.0;
  Vector dx, du, dp;
  Matrix pp;  // nm x nm
  Matrix px;  // nm x m
  Matrix pu;  // nm x n
};

class Hamiltonian {
 public:
  virtual ~Hamiltonian() = default;

  virtual Dimensions dims() const = 0;
  /// order 0: value; 1: + first derivatives; 2: + pp, px, pu blocks.
  virtual HamiltonianJet jet(const RestrictedMomentumPoint& mpt, int order) const = 0;
  virtual std::string describe() const = 0;

  double value(const RestrictedMomentumPoint& mpt) const { return jet(mpt, 0).value; }

  /// Optional domain guard g(x,u,p): points with g < 0 raise OutOfDomain.
  void set_guard(Expr guard);
  const std::optional<Expr>& guard() const { return guard_; }

 protected:
  void check_guard(const RestrictedMomentumPoint& mpt) const;

 private:
  std::optional<Expr> guard_;
  CompiledExpr guard_compiled_;
};

using HamiltonianPtr = std::shared_ptr<const Hamiltonian>;

/// H given in closed form over x, u, p.
class ExplicitHamiltonian final : public Hamiltonian {
 public:
  ExplicitHamiltonian(Dimensions dims, Expr h);
  ExplicitHamiltonian(Dimensions dims, std::string_view h);

  Dimensions dims() const override { return dims_; }
  HamiltonianJet jet(const RestrictedMomentumPoint& mpt, int order) const override;
  std::string describe() const override { return expr_.str(); }
  const Expr& expression() const { return expr_; }

 private:
  Dimensions dims_;
  Expr expr_;
  CompiledExpr compiled_;
};

/// H = v . p - L at v = Leg^{-1}(p). Derivatives use the implicit function
/// identities dH/dp = v, dH/dx = -L_x, dH/du = -L_u, H_pp = L_vv^{-1},
/// H_px = -L_vv^{-1} L_vx, H_pu = -L_vv^{-1} L_vu, so the Newton solve is
/// never differentiated.
class DerivedHamiltonian final : public Hamiltonian {
 public:
  DerivedHamiltonian(std::shared_ptr<const FieldTheory> theory, NewtonSettings settings = {});

  Dimensions dims() const override { return theory_->dims(); }
  HamiltonianJet jet(const RestrictedMomentumPoint& mpt, int order) const override;
  std::string describe() const override { return "v.p - L at v = Leg^-1(p), L = " + theory_->lagrangian().str(); }
  const FieldTheory& theory() const { return *theory_; }

 private:
  std::shared_ptr<const FieldTheory> theory_;
  NewtonSettings settings_;
};

/// H(x, u, p); explicit or derived.
double hamiltonian(const Hamiltonian& h, const RestrictedMomentumPoint& mpt);

}  // namespace mshj
