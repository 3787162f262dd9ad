#include "mshj/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace mshj {

PushforwardField::PushforwardField(std::shared_ptr<const FieldTheory> theory, FieldPtr psi)
    : theory_(std::move(theory)), psi_(std::move(psi)) {
  if (psi_->dims() != theory_->dims() || psi_->size() != static_cast<std::size_t>(theory_->dims().jets()))
    throw ConfigError("jet field does not match the field theory dimensions");
}

FieldJet PushforwardField::jet(const Vector& x, const Vector& u, int order) const {
  const Dimensions d = theory_->dims();
  FieldJet p = psi_->jet(x, u, std::min(order, 1));
  LagrangianJet l = theory_->jet({x, u, unflatten(p.value, d)}, order >= 1 ? 2 : 1);
  FieldJet s;
  s.value = l.dv;
  if (order >= 1) {
    s.dx = l.vx + l.vv * p.dx;
    s.du = l.vu + l.vv * p.du;
  }
  if (order >= 2) fd_second_derivatives(*this, x, u, s);
  return s;
}

PullbackField::PullbackField(std::shared_ptr<const FieldTheory> theory, FieldPtr s, NewtonSettings settings)
    : theory_(std::move(theory)), s_(std::move(s)), settings_(std::move(settings)) {
  if (s_->dims() != theory_->dims() || s_->size() != static_cast<std::size_t>(theory_->dims().jets()))
    throw ConfigError("momentum section does not match the field theory dimensions");
}

FieldJet PullbackField::jet(const Vector& x, const Vector& u, int order) const {
  const Dimensions d = theory_->dims();
  FieldJet s = s_->jet(x, u, std::min(order, 1));
  JetPoint pt = inverse_legendre(*theory_, {x, u, unflatten(s.value, d)}, settings_);
  FieldJet psi;
  psi.value = flatten(pt.v);
  if (order >= 1) {
    LagrangianJet l = theory_->jet(pt, 2);
    Eigen::PartialPivLU<Matrix> lu(l.vv);
    psi.dx = lu.solve(s.dx - l.vx);
    psi.du = lu.solve(s.du - l.vu);
  }
  if (order >= 2) fd_second_derivatives(*this, x, u, psi);
  return psi;
}

FieldPtr pushforward_jetfield(std::shared_ptr<const FieldTheory> theory, FieldPtr psi) {
  return std::make_shared<PushforwardField>(std::move(theory), std::move(psi));
}

FieldPtr pullback_section(std::shared_ptr<const FieldTheory> theory, FieldPtr s, NewtonSettings settings) {
  return std::make_shared<PullbackField>(std::move(theory), std::move(s), std::move(settings));
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::PassPass: return "pass-pass";
    case Verdict::FailFail: return "fail-fail";
    case Verdict::Mixed: return "mixed";
  }
  return "?";
}

namespace {

PointEvaluator concat(std::vector<PointEvaluator> parts) {
  return [parts = std::move(parts)](std::span<const double> pt) {
    PointResiduals all;
    for (const auto& p : parts) {
      PointResiduals r = p(pt);
      std::move(r.begin(), r.end(), std::back_inserter(all));
    }
    return all;
  };
}

std::string format_point(std::span<const double> pt) {
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < pt.size(); ++k) os << (k ? ", " : "") << pt[k];
  os << ")";
  return os.str();
}

}  // namespace

EquivalenceReport equivalence_report(std::shared_ptr<const FieldTheory> theory, HamiltonianPtr h, FieldPtr psi,
                                     const LagCoefficients& F, const HamCoefficients& G, const GridSpec& grid,
                                     double tol, FieldPtr W, SweepOptions options) {
  FieldPtr s = pushforward_jetfield(theory, psi);
  LagrangianCandidate lc{psi, W, F};
  HamiltonianCandidate hc{s, W, G};
  std::vector<PointEvaluator> lag{lagrangian_evaluator(theory, lc, Suite::Standard)};
  std::vector<PointEvaluator> ham{hamiltonian_evaluator(h, hc, Suite::Standard)};
  if (W) {
    lag.push_back(lagrangian_evaluator(theory, lc, Suite::Classic));
    ham.push_back(hamiltonian_evaluator(h, hc, Suite::Classic));
  }
  options.keep_pointwise = true;

  EquivalenceReport out;
  out.lagrangian = grid_report(concat(std::move(lag)), grid, tol, options);
  out.hamiltonian = grid_report(concat(std::move(ham)), grid, tol, options);
  if (out.lagrangian.pass && out.hamiltonian.pass)
    out.verdict = Verdict::PassPass;
  else if (!out.lagrangian.pass && !out.hamiltonian.pass)
    out.verdict = Verdict::FailFail;
  else
    out.verdict = Verdict::Mixed;

  std::vector<double> lp = out.lagrangian.pointwise_max(), hp = out.hamiltonian.pointwise_max();
  out.worst_transport_excess = -std::numeric_limits<double>::infinity();
  std::size_t worst = 0;
  for (std::size_t k = 0; k < lp.size(); ++k) {
    double excess = hp[k] - (10.0 * lp[k] + 1e-10);
    if (excess > out.worst_transport_excess) {
      out.worst_transport_excess = excess;
      worst = k;
    }
  }
  out.transport_consistent = out.worst_transport_excess <= 0.0;
  out.worst_transport_point.resize(grid.axes.size());
  if (!lp.empty()) grid.point(worst, out.worst_transport_point);
  return out;
}

// ---------------------------------------------------------------------------
// Complete solutions
// ---------------------------------------------------------------------------

std::vector<std::string> CompleteSolutionFamily::lambda_names() const {
  std::vector<std::string> names;
  for (int k = 0; k < dims.jets(); ++k) names.push_back("lam" + std::to_string(k + 1));
  return names;
}

FieldPtr CompleteSolutionFamily::slice(std::span<const double> lambda) const {
  auto names = lambda_names();
  std::map<std::string, Expr> bind;
  for (std::size_t k = 0; k < names.size(); ++k) bind[names[k]] = Expr::constant(lambda[k]);
  std::vector<Expr> comps;
  for (const auto& c : components) comps.push_back(c.substituted(bind));
  return make_expr_field(dims, std::move(comps));
}

CompleteSolutionReport complete_solution_check(std::shared_ptr<const FieldTheory> theory, HamiltonianPtr h,
                                               const CompleteSolutionFamily& family, const LagCoefficients& F,
                                               const HamCoefficients& G, const GridSpec& xu_grid,
                                               const CompleteCheckSettings& settings) {
  const Dimensions d = family.dims;
  const int K = d.jets();
  if (static_cast<int>(family.components.size()) != K)
    throw ConfigError("a complete family needs m*n = " + std::to_string(K) + " components");
  if (static_cast<int>(family.lambda_grid.axes.size()) != K)
    throw ConfigError("a complete family needs m*n = " + std::to_string(K) + " parameter axes");
  if (family.side == CompleteSolutionFamily::Side::Lagrangian && !theory)
    throw ConfigError("a Lagrangian family needs a field theory");
  if (family.side == CompleteSolutionFamily::Side::Hamiltonian && !h)
    throw ConfigError("a Hamiltonian family needs a Hamiltonian");

  auto lam_names = family.lambda_names();
  std::vector<std::string> slots = lam_names;
  for (const auto& s : base_slots(d)) slots.push_back(s);
  std::vector<CompiledExpr> phi;
  for (const auto& c : family.components) phi.emplace_back(c, slots);
  std::optional<CompiledExpr> constraint;
  if (family.constraint) constraint.emplace(*family.constraint, lam_names);
  std::vector<int> lam_idx(K);
  for (int k = 0; k < K; ++k) lam_idx[k] = k;

  auto admissible = [&](std::span<const double> lam) { return !constraint || constraint->eval(lam) >= 0.0; };
  auto jacobian = [&](std::span<const double> z, Vector& value) {
    Matrix J(K, K);
    value.resize(K);
    for (int k = 0; k < K; ++k) {
      Derivatives dk = phi[k].derive(z, lam_idx, 1);
      value[k] = dk.value;
      J.row(k) = dk.gradient.transpose();
    }
    return J;
  };

  CompleteSolutionReport rep;
  rep.min_abs_det = std::numeric_limits<double>::infinity();
  rep.worst_slice_residual = 0.0;

  const std::size_t nlam = family.lambda_grid.size();
  const std::size_t nxu = xu_grid.size();
  std::vector<double> lam(K), z(K + d.m + d.n), xu(d.m + d.n);
  for (std::size_t li = 0; li < nlam; ++li) {
    family.lambda_grid.point(li, lam);
    if (!admissible(lam)) continue;
    ++rep.slices;

    // (a) slice verification
    FieldPtr f = family.slice(lam);
    PointEvaluator eval = family.side == CompleteSolutionFamily::Side::Lagrangian
                              ? lagrangian_evaluator(theory, LagrangianCandidate{f, nullptr, F}, Suite::Standard)
                              : hamiltonian_evaluator(h, HamiltonianCandidate{f, nullptr, G}, Suite::Standard);
    ResidualReport r = grid_report(eval, xu_grid, settings.tol, settings.sweep);
    if (r.pass) ++rep.slices_passed;
    if (r.max_abs() >= rep.worst_slice_residual) {
      rep.worst_slice_residual = r.max_abs();
      rep.worst_slice_lambda = lam;
    }

    // (b) local diffeomorphism proxy
    std::copy(lam.begin(), lam.end(), z.begin());
    for (std::size_t k = 0; k < nxu; ++k) {
      xu_grid.point(k, xu);
      std::copy(xu.begin(), xu.end(), z.begin() + K);
      Vector value;
      double det = std::abs(jacobian(z, value).determinant());
      ++rep.det_samples;
      rep.max_abs_det = std::max(rep.max_abs_det, det);
      if (det < rep.min_abs_det) rep.min_abs_det = det;
      if (!(det > settings.det_tol))
        throw DegenerateJacobian("dPhi/dlambda is degenerate (|det| = " + std::to_string(det) + ") at (lambda, x, u) = " +
                                 format_point(z));
    }
  }
  if (rep.slices == 0) throw InvalidParams("no parameter sample satisfies the family constraint");

  // (c) coverage probes
  std::mt19937_64 rng(settings.seed);
  auto uniform = [&](const Axis& a) { return std::uniform_real_distribution<double>(a.lo, a.hi)(rng); };
  std::vector<double> start(K);
  for (int k = 0; k < K; ++k) {
    const Axis& a = family.lambda_grid.axes[k];
    start[k] = 0.5 * (a.lo + a.hi);
  }
  for (std::size_t p = 0; p < settings.probes; ++p) {
    std::vector<double> target_lam(K);
    for (int tries = 0;; ++tries) {
      for (int k = 0; k < K; ++k) target_lam[k] = uniform(family.lambda_grid.axes[k]);
      if (admissible(target_lam)) break;
      if (tries > 10000) throw InvalidParams("cannot sample the family constraint region");
    }
    for (int k = 0; k < d.m + d.n; ++k) z[K + k] = uniform(xu_grid.axes[k]);
    std::copy(target_lam.begin(), target_lam.end(), z.begin());
    Vector target;
    jacobian(z, target);

    std::copy(start.begin(), start.end(), z.begin());
    double err = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 50; ++it) {
      Vector value;
      Matrix J = jacobian(z, value);
      Vector r = value - target;
      err = r.lpNorm<Eigen::Infinity>();
      if (err < 1e-12) break;
      if (std::abs(J.determinant()) < 1e-14) break;
      Vector step = J.partialPivLu().solve(r);
      // Halve until the residual drops; sqrt-type families leave their domain
      // on a full step.
      std::vector<double> trial = z;
      double scale = 1.0;
      bool moved = false;
      for (int halving = 0; halving <= 30 && !moved; ++halving, scale *= 0.5) {
        for (int k = 0; k < K; ++k) trial[k] = z[k] - scale * step[k];
        try {
          Vector tv;
          jacobian(trial, tv);
          double terr = (tv - target).lpNorm<Eigen::Infinity>();
          moved = std::isfinite(terr) && terr < err;
        } catch (const DomainError&) {
        }
      }
      if (!moved) break;
      z = trial;
    }
    ++rep.probes;
    rep.worst_probe_error = std::max(rep.worst_probe_error, err);
    if (!(err < 1e-8))
      throw CoverageMiss("no parameter reproduces the target jet at (x, u) = " +
                         format_point(std::span<const double>(z).subspan(K)) + " (residual " + std::to_string(err) +
                         ")");
    ++rep.probes_hit;
  }
  rep.pass = rep.slices_passed == rep.slices;
  return rep;
}

}  // namespace mshj
