#include "mshj/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mshj {

RestrictedMomentumPoint restricted_legendre(const FieldTheory& theory, const JetPoint& pt) {
  LagrangianJet j = theory.jet(pt, 1);
  return {pt.x, pt.u, unflatten(j.dv, theory.dims())};
}

ExtendedMomentumPoint extended_legendre(const FieldTheory& theory, const JetPoint& pt) {
  LagrangianJet j = theory.jet(pt, 1);
  ExtendedMomentumPoint e{{pt.x, pt.u, unflatten(j.dv, theory.dims())}, 0.0};
  e.p0 = j.value - flatten(pt.v).dot(j.dv);
  return e;
}

namespace {

std::string describe_point(const RestrictedMomentumPoint& mpt) {
  std::ostringstream os;
  os << "p = (";
  for (Eigen::Index a = 0; a < mpt.p.rows(); ++a)
    for (Eigen::Index i = 0; i < mpt.p.cols(); ++i) os << (a || i ? ", " : "") << mpt.p(a, i);
  os << ")";
  return os.str();
}

}  // namespace

LegendreSolve solve_legendre(const FieldTheory& theory, const RestrictedMomentumPoint& mpt,
                             const NewtonSettings& settings) {
  if (!(settings.tol > 0)) throw InvalidParams("Newton tolerance must be positive");
  const Dimensions d = theory.dims();
  const Vector target = flatten(mpt.p);

  JetPoint pt{mpt.x, mpt.u, Matrix::Zero(d.n, d.m)};
  if (settings.initial == NewtonSettings::Initial::Provided) {
    if (settings.guess.rows() != d.n || settings.guess.cols() != d.m)
      throw InvalidParams("Newton guess must be n x m");
    pt.v = settings.guess;
  }

  auto evaluate = [&](const JetPoint& at, LagrangianJet& j) {
    try {
      j = theory.jet(at, 2);
    } catch (const DomainError& e) {
      throw OutOfDomain("inverse Legendre map left the domain of L at " + describe_point(mpt) + ": " + e.what());
    }
  };

  LagrangianJet j;
  evaluate(pt, j);
  double res = (j.dv - target).lpNorm<Eigen::Infinity>();
  for (int it = 0; it <= settings.max_iter; ++it) {
    if (res <= settings.tol) return {pt, it, res};
    if (it == settings.max_iter) break;
    Eigen::PartialPivLU<Matrix> lu(j.vv);
    if (std::abs(j.vv.determinant()) < 1e-14) {
      // A Hessian that degenerates only after the iterates ran off to large
      // |v| signals a momentum outside the Legendre image.
      if (it > 0 && pt.v.lpNorm<Eigen::Infinity>() > 1e3)
        throw OutOfDomain("inverse Legendre iterates diverge at " + describe_point(mpt) +
                          " (point outside the Legendre image?)");
      throw SingularJacobian("Hessian of L is singular during Legendre inversion at " + describe_point(mpt));
    }
    Vector step = lu.solve(j.dv - target);
    double scale = 1.0;
    for (int halving = 0;; ++halving) {
      JetPoint trial = pt;
      trial.v -= scale * unflatten(step, d);
      if (!trial.v.allFinite() || trial.v.lpNorm<Eigen::Infinity>() > 1e8)
        throw OutOfDomain("inverse Legendre iterates diverge at " + describe_point(mpt) +
                          " (point outside the Legendre image?)");
      LagrangianJet tj;
      evaluate(trial, tj);
      double tres = (tj.dv - target).lpNorm<Eigen::Infinity>();
      if (tres < res || halving >= 30) {
        pt = std::move(trial);
        j = std::move(tj);
        res = tres;
        break;
      }
      scale *= 0.5;
    }
  }
  throw NonConvergence("inverse Legendre map did not converge in " + std::to_string(settings.max_iter) +
                       " iterations at " + describe_point(mpt));
}

JetPoint inverse_legendre(const FieldTheory& theory, const RestrictedMomentumPoint& mpt,
                          const NewtonSettings& settings) {
  return solve_legendre(theory, mpt, settings).point;
}

// ---------------------------------------------------------------------------

void Hamiltonian::set_guard(Expr guard) {
  guard_compiled_ = CompiledExpr(guard, momentum_slots(dims()));
  guard_ = std::move(guard);
}

void Hamiltonian::check_guard(const RestrictedMomentumPoint& mpt) const {
  if (!guard_) return;
  double g = guard_compiled_.eval(mpt.slots());
  if (g < 0)
    throw OutOfDomain("momentum point outside the Hamiltonian domain (" + guard_->str() + " < 0 at " +
                      describe_point(mpt) + ")");
}

ExplicitHamiltonian::ExplicitHamiltonian(Dimensions dims, Expr h) : dims_(dims), expr_(std::move(h)) {
  auto slots = momentum_slots(dims_);
  for (const auto& name : expr_.variables())
    if (std::find(slots.begin(), slots.end(), name) == slots.end())
      throw ConfigError("Hamiltonian references undeclared coordinate '" + name + "'");
  compiled_ = CompiledExpr(expr_, slots);
}

ExplicitHamiltonian::ExplicitHamiltonian(Dimensions dims, std::string_view h)
    : ExplicitHamiltonian(dims, Expr::parse(h).renamed(coordinate_aliases(dims))) {}

HamiltonianJet ExplicitHamiltonian::jet(const RestrictedMomentumPoint& mpt, int order) const {
  check_guard(mpt);
  const int m = dims_.m, n = dims_.n, k = dims_.jets();
  auto s = mpt.slots();
  HamiltonianJet h;
  if (order == 0) {
    h.value = compiled_.eval(s);
    return h;
  }
  Derivatives d = order >= 2 ? compiled_.hessian(s) : compiled_.gradient(s);
  h.value = d.value;
  h.dx = d.gradient.segment(0, m);
  h.du = d.gradient.segment(m, n);
  h.dp = d.gradient.segment(m + n, k);
  if (order >= 2) {
    h.pp = d.hessian.block(m + n, m + n, k, k);
    h.px = d.hessian.block(m + n, 0, k, m);
    h.pu = d.hessian.block(m + n, m, k, n);
  }
  return h;
}

DerivedHamiltonian::DerivedHamiltonian(std::shared_ptr<const FieldTheory> theory, NewtonSettings settings)
    : theory_(std::move(theory)), settings_(std::move(settings)) {}

HamiltonianJet DerivedHamiltonian::jet(const RestrictedMomentumPoint& mpt, int order) const {
  check_guard(mpt);
  JetPoint pt = inverse_legendre(*theory_, mpt, settings_);
  LagrangianJet l = theory_->jet(pt, order >= 2 ? 2 : 1);
  HamiltonianJet h;
  Vector v = flatten(pt.v);
  h.value = v.dot(flatten(mpt.p)) - l.value;
  if (order == 0) return h;
  h.dx = -l.dx;
  h.du = -l.du;
  h.dp = v;
  if (order >= 2) {
    Eigen::PartialPivLU<Matrix> lu(l.vv);
    h.pp = lu.inverse();
    h.px = -lu.solve(l.vx);
    h.pu = -lu.solve(l.vu);
  }
  return h;
}

double hamiltonian(const Hamiltonian& h, const RestrictedMomentumPoint& mpt) { return h.value(mpt); }

}  // namespace mshj
