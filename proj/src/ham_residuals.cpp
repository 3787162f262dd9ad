#include "mshj/ham_residuals.hpp"

#include <algorithm>

namespace mshj {

namespace {

RestrictedMomentumPoint on_image(const Vector& x, const Vector& u, const FieldJet& s, Dimensions d) {
  return {x, u, unflatten(s.value, d)};
}

void check_candidate(const SectionFunction& f, Dimensions d, std::size_t size, const char* what) {
  if (f.dims() != d) throw ConfigError(std::string(what) + " has the wrong (m, n)");
  if (f.size() != size)
    throw ConfigError(std::string(what) + " needs " + std::to_string(size) + " components, got " +
                      std::to_string(f.size()));
}

std::string label(const char* stem, std::initializer_list<int> idx) {
  std::string s = std::string(stem) + "[";
  bool first = true;
  for (int k : idx) {
    if (!first) s += ",";
    s += std::to_string(k + 1);
    first = false;
  }
  return s + "]";
}

}  // namespace

HamCoefficients HamCoefficients::expressions(Dimensions d, std::vector<Expr> flat) {
  if (flat.size() != static_cast<std::size_t>(d.n * d.m * d.m))
    throw ConfigError("G needs n*m*m = " + std::to_string(d.n * d.m * d.m) + " components, got " +
                      std::to_string(flat.size()));
  HamCoefficients c;
  c.kind_ = CoefficientKind::Expression;
  c.dims_ = d;
  auto slots = momentum_slots(d);
  for (const auto& e : flat) {
    for (const auto& name : e.variables())
      if (std::find(slots.begin(), slots.end(), name) == slots.end())
        throw ConfigError("G component '" + e.str() + "' references '" + name + "', not an (x, u, p) coordinate");
    c.compiled_.emplace_back(e, slots);
  }
  return c;
}

HamCoefficients HamCoefficients::zero(Dimensions d) {
  return expressions(d, std::vector<Expr>(static_cast<std::size_t>(d.n * d.m * d.m), Expr::constant(0.0)));
}

HamCoefficients HamCoefficients::induced(Dimensions d) {
  HamCoefficients c;
  c.kind_ = CoefficientKind::Induced;
  c.dims_ = d;
  return c;
}

HamCoefficients HamCoefficients::solved(Dimensions d) {
  if (d.m != 1) throw InvalidParams("solved coefficients exist only for m = 1");
  HamCoefficients c;
  c.kind_ = CoefficientKind::Solved;
  c.dims_ = d;
  return c;
}

Vector HamCoefficients::values(const Hamiltonian& h, const RestrictedMomentumPoint& mpt, const FieldJet* s) const {
  const Dimensions d = h.dims();
  const int m = d.m, n = d.n;
  Vector G(n * m * m);
  switch (kind_) {
    case CoefficientKind::Expression: {
      if (dims_ != d) throw ConfigError("G was declared for different (m, n)");
      auto slots = mpt.slots();
      for (std::size_t k = 0; k < compiled_.size(); ++k) G[k] = compiled_[k].eval(slots);
      return G;
    }
    case CoefficientKind::Induced: {
      if (!s || s->dx.size() == 0) throw std::logic_error("induced G needs the candidate's first derivatives");
      for (int b = 0; b < n; ++b)
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k) G[(b * m + j) * m + k] = s->dx(b * m + k, j);
      return G;
    }
    case CoefficientKind::Solved: {
      if (m != 1) throw InvalidParams("solved G is only defined for m = 1");
      return -h.jet(mpt, 1).du;
    }
  }
  return G;
}

Matrix HamCoefficients::derivatives(const Hamiltonian& h, const RestrictedMomentumPoint& mpt,
                                    const FieldJet* s) const {
  const Dimensions d = h.dims();
  const int m = d.m, n = d.n;
  Matrix D = Matrix::Zero(n * m * m, m + n + d.jets());
  switch (kind_) {
    case CoefficientKind::Expression: {
      auto slots = mpt.slots();
      for (std::size_t k = 0; k < compiled_.size(); ++k)
        D.row(static_cast<Eigen::Index>(k)) = compiled_[k].gradient(slots).gradient.transpose();
      return D;
    }
    case CoefficientKind::Induced: {
      if (!s || s->second.empty()) throw std::logic_error("induced G derivatives need second derivatives of s");
      for (int b = 0; b < n; ++b)
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k) {
            const Matrix& hs = s->second[b * m + k];
            for (int c = 0; c < m + n; ++c) D((b * m + j) * m + k, c) = hs(j, c);
          }
      return D;
    }
    case CoefficientKind::Solved:
      throw InvalidParams("derivatives of solved G are not available (only needed for m >= 2)");
  }
  return D;
}

Vector hdw_residual(const Hamiltonian& h, const HamCoefficients& G, const RestrictedMomentumPoint& mpt,
                    const FieldJet* s) {
  const Dimensions d = h.dims();
  const int m = d.m, n = d.n;
  HamiltonianJet hj = h.jet(mpt, 1);
  Vector g = G.values(h, mpt, s);
  Vector R(n);
  for (int a = 0; a < n; ++a) {
    double r = hj.du[a];
    for (int i = 0; i < m; ++i) r += g[(a * m + i) * m + i];
    R[a] = r;
  }
  return R;
}

HamIntegrability integrability_residual_ham(const Hamiltonian& h, const HamCoefficients& G,
                                            const RestrictedMomentumPoint& mpt, const FieldJet* s) {
  const Dimensions d = h.dims();
  const int m = d.m, n = d.n;
  const int pairs = m * (m - 1) / 2;
  HamIntegrability out;
  out.mixed.values.resize(n * pairs);
  out.bracket.values.resize(n * m * pairs);
  if (pairs == 0) return out;

  HamiltonianJet hj = h.jet(mpt, 2);
  Vector g = G.values(h, mpt, s);
  Matrix D = G.derivatives(h, mpt, s);
  auto gi = [&](int a, int j, int i) { return (a * m + j) * m + i; };
  auto pi = [&](int a, int i) { return a * m + i; };

  // X_j applied to dH/dp_A^k.
  auto mixed = [&](int j, int a, int k) {
    double r = hj.px(pi(a, k), j);
    for (int b = 0; b < n; ++b) r += hj.dp[pi(b, j)] * hj.pu(pi(a, k), b);
    for (int b = 0; b < n; ++b)
      for (int l = 0; l < m; ++l) r += g[gi(b, j, l)] * hj.pp(pi(b, l), pi(a, k));
    return r;
  };
  // X_j applied to G row.
  auto along = [&](int j, int row) {
    double r = D(row, j);
    for (int b = 0; b < n; ++b) r += hj.dp[pi(b, j)] * D(row, m + b);
    for (int b = 0; b < n; ++b)
      for (int l = 0; l < m; ++l) r += g[gi(b, j, l)] * D(row, m + n + pi(b, l));
    return r;
  };

  int p1 = 0, p2 = 0;
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        out.mixed.values[p1++] = mixed(j, a, k) - mixed(k, a, j);
        out.mixed.labels.push_back(label("H", {a, j, k}));
      }
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = j + 1; k < m; ++k) {
          out.bracket.values[p2++] = along(j, gi(a, k, i)) - along(k, gi(a, j, i));
          out.bracket.labels.push_back(label("G", {a, i, j, k}));
        }
  return out;
}

Vector gen_ham_hj_residual(const Hamiltonian& h, const FieldJet& s, const HamCoefficients& G, const Vector& x,
                           const Vector& u) {
  const Dimensions d = h.dims();
  const int m = d.m, n = d.n;
  RestrictedMomentumPoint mpt = on_image(x, u, s, d);
  HamiltonianJet hj = h.jet(mpt, 1);
  Vector g = G.values(h, mpt, &s);
  Vector R(n * m * m);
  for (int b = 0; b < n; ++b)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        double r = s.dx(b * m + k, j);
        for (int a = 0; a < n; ++a) r += hj.dp[a * m + j] * s.du(b * m + k, a);
        R[(b * m + j) * m + k] = r - g[(b * m + j) * m + k];
      }
  return R;
}

Vector gen_ham_hj_residual(const Hamiltonian& h, const SectionFunction& s, const HamCoefficients& G,
                           const Vector& x, const Vector& u) {
  check_candidate(s, h.dims(), h.dims().jets(), "momentum section");
  return gen_ham_hj_residual(h, s.jet(x, u, 1), G, x, u);
}

HamClosedness ham_closedness_residual(const Hamiltonian& h, const FieldJet& s, const Vector& x, const Vector& u) {
  const Dimensions d = h.dims();
  const int m = d.m, n = d.n;
  HamiltonianJet hj = h.jet(on_image(x, u, s, d), 1);
  HamClosedness out;
  out.family1.resize(n);
  for (int a = 0; a < n; ++a) {
    double r = hj.du[a];
    for (int b = 0; b < n; ++b)
      for (int j = 0; j < m; ++j) r += hj.dp[b * m + j] * s.du(b * m + j, a);
    for (int i = 0; i < m; ++i) r += s.dx(a * m + i, i);
    out.family1[a] = r;
  }
  out.family2.resize(n * n * m);
  out.family2_antisymmetric.resize(m * n * (n - 1) / 2);
  int pos = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int i = 0; i < m; ++i) {
        double r = s.du(a * m + i, b) - s.du(b * m + i, a);
        out.family2[(a * n + b) * m + i] = r;
        if (a < b) out.family2_antisymmetric[pos++] = r;
      }
  return out;
}

HamClosedness ham_closedness_residual(const Hamiltonian& h, const SectionFunction& s, const Vector& x,
                                      const Vector& u) {
  check_candidate(s, h.dims(), h.dims().jets(), "momentum section");
  return ham_closedness_residual(h, s.jet(x, u, 1), x, u);
}

double classic_hj_residual(const Hamiltonian& h, const FieldJet& W, const Vector& x, const Vector& u) {
  const Dimensions d = h.dims();
  const int m = d.m, n = d.n;
  RestrictedMomentumPoint mpt{x, u, Matrix(n, m)};
  double div = 0.0;
  for (int i = 0; i < m; ++i) {
    div += W.dx(i, i);
    for (int a = 0; a < n; ++a) mpt.p(a, i) = W.du(i, a);
  }
  return div + h.value(mpt);
}

double classic_hj_residual(const Hamiltonian& h, const SectionFunction& W, const Vector& x, const Vector& u) {
  check_candidate(W, h.dims(), h.dims().m, "generating form");
  return classic_hj_residual(h, W.jet(x, u, 1), x, u);
}

PointResiduals hamiltonian_suite(const Hamiltonian& h, const HamiltonianCandidate& c, Suite suite, const Vector& x,
                                 const Vector& u) {
  const Dimensions d = h.dims();
  PointResiduals out;
  if (suite == Suite::Classic) {
    if (!c.W) throw ConfigError("the classic Hamiltonian suite needs a generating form W");
    check_candidate(*c.W, d, d.m, "generating form");
    FieldJet W = c.W->jet(x, u, 1);
    out.push_back({"hj_classic", {classic_hj_residual(h, W, x, u)}});
    if (c.s) {
      check_candidate(*c.s, d, d.jets(), "momentum section");
      Vector s = c.s->value(x, u);
      std::vector<double> r(d.jets());
      for (int a = 0; a < d.n; ++a)
        for (int i = 0; i < d.m; ++i) r[a * d.m + i] = W.du(i, a) - s[a * d.m + i];
      out.push_back({"momentum_match", std::move(r)});
    }
    return out;
  }

  if (!c.s) throw ConfigError("the Hamiltonian suites need a momentum section candidate");
  check_candidate(*c.s, d, d.jets(), "momentum section");
  const bool need_second = suite == Suite::Coefficients && c.G.kind() == CoefficientKind::Induced && d.m >= 2;
  FieldJet s = c.s->jet(x, u, need_second ? 2 : 1);

  switch (suite) {
    case Suite::Generalized:
      out.push_back({"gen_hj", to_std(gen_ham_hj_residual(h, s, c.G, x, u))});
      break;
    case Suite::Standard: {
      out.push_back({"gen_hj", to_std(gen_ham_hj_residual(h, s, c.G, x, u))});
      HamClosedness cl = ham_closedness_residual(h, s, x, u);
      out.push_back({"closedness_1", to_std(cl.family1)});
      out.push_back({"closedness_2", to_std(cl.family2_antisymmetric)});
      break;
    }
    case Suite::Coefficients: {
      RestrictedMomentumPoint mpt = on_image(x, u, s, d);
      out.push_back({"hdw", to_std(hdw_residual(h, c.G, mpt, &s))});
      HamIntegrability in = integrability_residual_ham(h, c.G, mpt, &s);
      out.push_back({"integrability_1", to_std(in.mixed.values)});
      out.push_back({"integrability_2", to_std(in.bracket.values)});
      break;
    }
    case Suite::Classic:
      break;
  }
  return out;
}

PointEvaluator hamiltonian_evaluator(HamiltonianPtr h, HamiltonianCandidate c, Suite suite) {
  return [h = std::move(h), c = std::move(c), suite](std::span<const double> point) {
    Vector x, u;
    split_base_point(h->dims(), point, x, u);
    return hamiltonian_suite(*h, c, suite, x, u);
  };
}

}  // namespace mshj
