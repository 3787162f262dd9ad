#include "mshj/lag_residuals.hpp"

#include <algorithm>

namespace mshj {

namespace {

JetPoint on_image(const Vector& x, const Vector& u, const FieldJet& psi, Dimensions d) {
  return {x, u, unflatten(psi.value, d)};
}

void check_candidate(const SectionFunction& f, Dimensions d, std::size_t size, const char* what) {
  if (f.dims() != d) throw ConfigError(std::string(what) + " has the wrong (m, n)");
  if (f.size() != size)
    throw ConfigError(std::string(what) + " needs " + std::to_string(size) + " components, got " +
                      std::to_string(f.size()));
}

std::string pair_label(const char* stem, int a, int b, int c, int d) {
  return std::string(stem) + "[" + std::to_string(a + 1) + "," + std::to_string(b + 1) + "," + std::to_string(c + 1) +
         (d >= 0 ? "," + std::to_string(d + 1) : std::string()) + "]";
}

}  // namespace

// ---------------------------------------------------------------------------
// Coefficients
// ---------------------------------------------------------------------------

LagCoefficients LagCoefficients::expressions(Dimensions d, std::vector<Expr> flat) {
  if (flat.size() != static_cast<std::size_t>(d.m * d.m * d.n))
    throw ConfigError("F needs m*m*n = " + std::to_string(d.m * d.m * d.n) + " components, got " +
                      std::to_string(flat.size()));
  LagCoefficients c;
  c.kind_ = CoefficientKind::Expression;
  c.dims_ = d;
  auto slots = jet_slots(d);
  for (const auto& e : flat) {
    for (const auto& name : e.variables())
      if (std::find(slots.begin(), slots.end(), name) == slots.end())
        throw ConfigError("F component '" + e.str() + "' references '" + name + "', not an (x, u, v) coordinate");
    c.compiled_.emplace_back(e, slots);
  }
  c.exprs_ = std::move(flat);
  return c;
}

LagCoefficients LagCoefficients::zero(Dimensions d) {
  return expressions(d, std::vector<Expr>(static_cast<std::size_t>(d.m * d.m * d.n), Expr::constant(0.0)));
}

LagCoefficients LagCoefficients::induced(Dimensions d) {
  LagCoefficients c;
  c.kind_ = CoefficientKind::Induced;
  c.dims_ = d;
  return c;
}

LagCoefficients LagCoefficients::solved(Dimensions d) {
  if (d.m != 1) throw InvalidParams("solved coefficients exist only for m = 1");
  LagCoefficients c;
  c.kind_ = CoefficientKind::Solved;
  c.dims_ = d;
  return c;
}

Vector LagCoefficients::values(const FieldTheory& theory, const JetPoint& pt, const FieldJet* psi) const {
  const Dimensions d = theory.dims();
  const int m = d.m, n = d.n;
  Vector F(m * m * n);
  switch (kind_) {
    case CoefficientKind::Expression: {
      if (dims_ != d) throw ConfigError("F was declared for different (m, n)");
      auto s = pt.slots();
      for (std::size_t k = 0; k < compiled_.size(); ++k) F[k] = compiled_[k].eval(s);
      return F;
    }
    case CoefficientKind::Induced: {
      if (!psi || psi->dx.size() == 0) throw std::logic_error("induced F needs the candidate's first derivatives");
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int a = 0; a < n; ++a) F[(j * m + k) * n + a] = psi->dx(a * m + k, j);
      return F;
    }
    case CoefficientKind::Solved: {
      if (m != 1) throw InvalidParams("solved F is only defined for m = 1");
      LagrangianJet l = theory.jet(pt, 2);
      Vector b(n);
      for (int a = 0; a < n; ++a) {
        b[a] = l.du[a] - l.vx(a, 0);
        for (int c = 0; c < n; ++c) b[a] -= pt.v(c, 0) * l.vu(a, c);
      }
      Eigen::PartialPivLU<Matrix> lu(l.vv);
      if (std::abs(l.vv.determinant()) < 1e-14) throw SingularJacobian("cannot solve for F: Hessian of L singular");
      return lu.solve(b);
    }
  }
  return F;
}

Matrix LagCoefficients::derivatives(const FieldTheory& theory, const JetPoint& pt, const FieldJet* psi) const {
  const Dimensions d = theory.dims();
  const int m = d.m, n = d.n, cols = m + n + d.jets();
  Matrix D = Matrix::Zero(m * m * n, cols);
  switch (kind_) {
    case CoefficientKind::Expression: {
      auto s = pt.slots();
      for (std::size_t k = 0; k < compiled_.size(); ++k)
        D.row(static_cast<Eigen::Index>(k)) = compiled_[k].gradient(s).gradient.transpose();
      return D;
    }
    case CoefficientKind::Induced: {
      if (!psi || psi->second.empty()) throw std::logic_error("induced F derivatives need second derivatives of psi");
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int a = 0; a < n; ++a) {
            const Matrix& h = psi->second[a * m + k];
            int row = (j * m + k) * n + a;
            for (int c = 0; c < m + n; ++c) D(row, c) = h(j, c);
          }
      return D;
    }
    case CoefficientKind::Solved:
      throw InvalidParams("derivatives of solved F are not available (only needed for m >= 2)");
  }
  return D;
}

// ---------------------------------------------------------------------------
// Residuals
// ---------------------------------------------------------------------------

Vector el_coefficient_residual(const FieldTheory& theory, const LagCoefficients& F, const JetPoint& pt,
                               const FieldJet* psi) {
  const Dimensions d = theory.dims();
  const int m = d.m, n = d.n;
  LagrangianJet l = theory.jet(pt, 2);
  Vector f = F.values(theory, pt, psi);
  Vector R(n);
  for (int a = 0; a < n; ++a) {
    double r = l.du[a];
    for (int i = 0; i < m; ++i) {
      r -= l.vx(a * m + i, i);
      for (int b = 0; b < n; ++b) r -= pt.v(b, i) * l.vu(a * m + i, b);
      for (int j = 0; j < m; ++j)
        for (int b = 0; b < n; ++b) r -= f[(j * m + i) * n + b] * l.vv(a * m + i, b * m + j);
    }
    R[a] = r;
  }
  return R;
}

LagIntegrability integrability_residual_lag(const LagCoefficients& F, const FieldTheory& theory, const JetPoint& pt,
                                            const FieldJet* psi) {
  const Dimensions d = theory.dims();
  const int m = d.m, n = d.n;
  LagIntegrability out;
  const int pairs = m * (m - 1) / 2;
  out.antisymmetry.values.resize(n * pairs);
  out.bracket.values.resize(n * m * pairs);
  if (pairs == 0) return out;

  Vector f = F.values(theory, pt, psi);
  Matrix D = F.derivatives(theory, pt, psi);
  auto idx = [&](int j, int i, int a) { return (j * m + i) * n + a; };
  // X_j applied to F_{k,i}^A.
  auto along = [&](int j, int row) {
    double s = D(row, j);
    for (int b = 0; b < n; ++b) s += pt.v(b, j) * D(row, m + b);
    for (int b = 0; b < n; ++b)
      for (int l = 0; l < m; ++l) s += f[idx(j, l, b)] * D(row, m + n + b * m + l);
    return s;
  };

  int a_pos = 0, b_pos = 0;
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        out.antisymmetry.values[a_pos++] = f[idx(j, k, a)] - f[idx(k, j, a)];
        out.antisymmetry.labels.push_back(pair_label("F", j, k, a, -1));
      }
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = j + 1; k < m; ++k) {
          out.bracket.values[b_pos++] = along(j, idx(k, i, a)) - along(k, idx(j, i, a));
          out.bracket.labels.push_back(pair_label("bracket", a, i, j, k));
        }
  return out;
}

Vector gen_lag_hj_residual(const FieldTheory& theory, const FieldJet& psi, const LagCoefficients& F,
                           const Vector& x, const Vector& u) {
  const Dimensions d = theory.dims();
  const int m = d.m, n = d.n;
  Vector f = F.values(theory, on_image(x, u, psi, d), &psi);
  Vector R(m * m * n);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k)
      for (int b = 0; b < n; ++b) {
        double r = psi.dx(b * m + k, j);
        for (int a = 0; a < n; ++a) r += psi.value[a * m + j] * psi.du(b * m + k, a);
        R[(j * m + k) * n + b] = r - f[(j * m + k) * n + b];
      }
  return R;
}

Vector gen_lag_hj_residual(const FieldTheory& theory, const SectionFunction& psi, const LagCoefficients& F,
                           const Vector& x, const Vector& u) {
  check_candidate(psi, theory.dims(), theory.dims().jets(), "jet field");
  return gen_lag_hj_residual(theory, psi.jet(x, u, 1), F, x, u);
}

LagIsotropy lag_isotropy_residual(const FieldTheory& theory, const FieldJet& psi, const Vector& x, const Vector& u) {
  const Dimensions d = theory.dims();
  const int m = d.m, n = d.n;
  LagrangianJet l = theory.jet(on_image(x, u, psi, d), 2);
  Matrix dPu = l.vu + l.vv * psi.du;  // nm x n
  Matrix dPx = l.vx + l.vv * psi.dx;  // nm x m
  Matrix Ax = l.vv * psi.dx;

  LagIsotropy out;
  out.a_full.resize(n * n * m);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int i = 0; i < m; ++i) out.a_full[(a * n + b) * m + i] = dPu(a * m + i, b);
  out.a_antisymmetric.resize(m * n * (n - 1) / 2);
  int pos = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int i = 0; i < m; ++i) out.a_antisymmetric[pos++] = dPu(a * m + i, b) - dPu(b * m + i, a);

  out.b_combined.resize(n);
  out.b_pullback.resize(n);
  for (int b = 0; b < n; ++b) {
    double comb = -l.du[b], pull = -l.du[b];
    for (int i = 0; i < m; ++i) {
      comb += Ax(b * m + i, i);
      pull += dPx(b * m + i, i);
      for (int a = 0; a < n; ++a) pull += psi.value[a * m + i] * dPu(a * m + i, b);
    }
    out.b_combined[b] = comb;
    out.b_pullback[b] = pull;
  }
  return out;
}

LagIsotropy lag_isotropy_residual(const FieldTheory& theory, const SectionFunction& psi, const Vector& x,
                                  const Vector& u) {
  check_candidate(psi, theory.dims(), theory.dims().jets(), "jet field");
  return lag_isotropy_residual(theory, psi.jet(x, u, 1), x, u);
}

LagGenerating lag_generating_residual(const FieldTheory& theory, const FieldJet& psi, const FieldJet& W,
                                      const Vector& x, const Vector& u) {
  const Dimensions d = theory.dims();
  const int m = d.m, n = d.n;
  LagrangianJet l = theory.jet(on_image(x, u, psi, d), 1);
  LagGenerating out;
  double s = -l.value;
  for (int i = 0; i < m; ++i) {
    s += W.dx(i, i);
    for (int a = 0; a < n; ++a) s += psi.value[a * m + i] * W.du(i, a);
  }
  out.scalar = s;
  out.momentum.resize(n * m);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < m; ++i) out.momentum[a * m + i] = W.du(i, a) - l.dv[a * m + i];
  return out;
}

LagGenerating lag_generating_residual(const FieldTheory& theory, const SectionFunction& psi,
                                      const SectionFunction& W, const Vector& x, const Vector& u) {
  check_candidate(psi, theory.dims(), theory.dims().jets(), "jet field");
  check_candidate(W, theory.dims(), theory.dims().m, "generating form");
  return lag_generating_residual(theory, psi.jet(x, u, 1), W.jet(x, u, 1), x, u);
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

PointResiduals lagrangian_suite(const FieldTheory& theory, const LagrangianCandidate& c, Suite suite,
                                const Vector& x, const Vector& u) {
  const Dimensions d = theory.dims();
  if (!c.psi) throw ConfigError("the Lagrangian suites need a jet field candidate");
  check_candidate(*c.psi, d, d.jets(), "jet field");
  const bool need_second = suite == Suite::Coefficients && c.F.kind() == CoefficientKind::Induced && d.m >= 2;
  FieldJet psi = c.psi->jet(x, u, need_second ? 2 : 1);

  PointResiduals out;
  switch (suite) {
    case Suite::Standard: {
      out.push_back({"gen_hj", to_std(gen_lag_hj_residual(theory, psi, c.F, x, u))});
      LagIsotropy iso = lag_isotropy_residual(theory, psi, x, u);
      out.push_back({"isotropy_A", to_std(iso.a_antisymmetric)});
      out.push_back({"isotropy_B", to_std(iso.b_pullback)});
      break;
    }
    case Suite::Generalized: {
      out.push_back({"gen_hj", to_std(gen_lag_hj_residual(theory, psi, c.F, x, u))});
      break;
    }
    case Suite::Classic: {
      if (!c.W) throw ConfigError("the classic Lagrangian suite needs a generating form W");
      check_candidate(*c.W, d, d.m, "generating form");
      LagGenerating r = lag_generating_residual(theory, psi, c.W->jet(x, u, 1), x, u);
      out.push_back({"hj_scalar", {r.scalar}});
      out.push_back({"momentum_match", to_std(r.momentum)});
      break;
    }
    case Suite::Coefficients: {
      JetPoint pt = on_image(x, u, psi, d);
      out.push_back({"el", to_std(el_coefficient_residual(theory, c.F, pt, &psi))});
      LagIntegrability in = integrability_residual_lag(c.F, theory, pt, &psi);
      out.push_back({"integrability_antisym", to_std(in.antisymmetry.values)});
      out.push_back({"integrability_bracket", to_std(in.bracket.values)});
      break;
    }
  }
  return out;
}

PointEvaluator lagrangian_evaluator(std::shared_ptr<const FieldTheory> theory, LagrangianCandidate c, Suite suite) {
  return [theory = std::move(theory), c = std::move(c), suite](std::span<const double> point) {
    Vector x, u;
    split_base_point(theory->dims(), point, x, u);
    return lagrangian_suite(*theory, c, suite, x, u);
  };
}

}  // namespace mshj
