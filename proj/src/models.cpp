#include "mshj/models.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace mshj {

namespace {

Expr num(double v) { return Expr::constant(v); }
Expr var(const std::string& name) { return Expr::variable(name); }
Expr call(UnaryOp op, const Expr& e) { return Expr::unary(op, e); }
Expr sq(const Expr& e) { return Expr::binary(BinaryOp::Pow, e, num(2)); }

std::string tag(std::initializer_list<double> values) {
  std::ostringstream os;
  os << "(";
  bool first = true;
  for (double v : values) {
    os << (first ? "" : ",") << v;
    first = false;
  }
  os << ")";
  return os.str();
}

GridSpec box(std::vector<Axis> axes) {
  GridSpec g;
  g.axes = std::move(axes);
  return g;
}

void reject_params(const std::string& model, const ModelParams& params, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : params) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw InvalidParams("model '" + model + "' has no parameter '" + key + "'");
  }
}

void finish_hamiltonians(ModelBundle& b, std::shared_ptr<ExplicitHamiltonian> closed, double delta) {
  auto derived = std::make_shared<DerivedHamiltonian>(b.theory);
  if (delta > 0) {
    Expr guard = num(1.0 - delta);
    for (int a = 0; a < b.theory->dims().n; ++a)
      for (int i = 0; i < b.theory->dims().m; ++i) guard = guard - sq(var(p_name(a, i)));
    derived->set_guard(guard);
    if (closed) closed->set_guard(guard);
  }
  b.domain_guard = delta;
  b.derived = derived;
  b.closed_form = closed;
  b.hamiltonian = closed ? HamiltonianPtr(closed) : HamiltonianPtr(derived);
}

// ---------------------------------------------------------------------------

ModelBundle minimal_surface(const ModelParams& params) {
  reject_params("minimal_surface", params, {});
  const Dimensions d{2, 1};
  ModelBundle b;
  b.name = "minimal_surface";
  b.theory = std::make_shared<FieldTheory>(d, "sqrt(1+v1_1^2+v1_2^2)");
  finish_hamiltonians(b, std::make_shared<ExplicitHamiltonian>(d, "-sqrt(1-p1_1^2-p1_2^2)"), 0.05);
  b.F = LagCoefficients::induced(d);
  b.G = HamCoefficients::induced(d);

  const Expr x = var("x1"), y = var("x2"), u = var("u1");
  for (auto [c1, c2] : {std::pair{0.0, 0.0}, std::pair{0.3, -0.2}}) {
    const double r2 = c1 * c1 + c2 * c2;
    // Lagrangian: psi = c, momenta p = c / sqrt(1 + |c|^2).
    const double r = std::sqrt(1 + r2);
    b.solutions.push_back({"constants", "constants" + tag({c1, c2}), Side::Lagrangian,
                           make_expr_field(d, {num(c1), num(c2)}),
                           make_expr_field(d, {num(c1 / r) * u + x / num(r), num(c2 / r) * u})});
    // Hamiltonian: s = c.
    const double q = std::sqrt(1 - r2);
    b.solutions.push_back({"constants", "constants" + tag({c1, c2}), Side::Hamiltonian,
                           make_expr_field(d, {num(c1), num(c2)}),
                           make_expr_field(d, {num(c1) * u + x * num(q), num(c2) * u})});
  }
  {
    // s^1 = fbar(y) = a y, s^2 = f(x) = b x. With c^2 = 1 - a^2 y^2,
    // W^1 = a y u + (1/b) [ (b x / 2) sqrt(c^2 - b^2 x^2) + (c^2 / 2) asin(b x / c) ],
    // W^2 = b x u. The Lagrangian member is Leg^{-1} o s = s / sqrt(1 - |s|^2).
    const double a = 0.1, bb = 0.1;
    Expr s1 = num(a) * y, s2 = num(bb) * x;
    Expr c2 = num(1) - sq(num(a) * y);
    Expr bx = num(bb) * x;
    Expr W1 = s1 * u + num(1 / bb) * (bx / num(2) * call(UnaryOp::Sqrt, c2 - sq(bx)) +
                                      c2 / num(2) * call(UnaryOp::Asin, bx / call(UnaryOp::Sqrt, c2)));
    Expr W2 = s2 * u;
    Expr root = call(UnaryOp::Sqrt, num(1) - sq(s1) - sq(s2));
    b.solutions.push_back({"linear", "linear" + tag({a, bb}), Side::Hamiltonian, make_expr_field(d, {s1, s2}),
                           make_expr_field(d, {W1, W2})});
    b.solutions.push_back({"linear", "linear" + tag({a, bb}), Side::Lagrangian,
                           make_expr_field(d, {s1 / root, s2 / root}), make_expr_field(d, {W1, W2})});
  }

  for (Side side : {Side::Lagrangian, Side::Hamiltonian}) {
    CompleteSolutionFamily f;
    f.side = side;
    f.dims = d;
    f.components = {var("lam1"), var("lam2")};
    f.lambda_grid = box({{"lam1", -0.9, 0.9, 7}, {"lam2", -0.9, 0.9, 7}});
    f.constraint = Expr::parse("0.81+1e-12-lam1^2-lam2^2");
    b.complete.push_back(f);
  }

  b.grid = box({{"x1", -1, 1, 21}, {"x2", -1, 1, 21}, {"u1", -1, 1, 21}});
  b.jet_grid = box({{"x1", -1, 1, 3}, {"x2", -1, 1, 3}, {"u1", -1, 1, 3}, {"v1_1", -2, 2, 21}, {"v1_2", -2, 2, 21}});
  b.tolerance = 1e-9;
  return b;
}

// ---------------------------------------------------------------------------

ModelBundle nonautonomous(const ModelParams& params) {
  reject_params("nonautonomous", params, {"lagrangian", "hamiltonian"});
  const Dimensions d{1, 1};
  const std::string free_particle = "0.5*v1_1^2";
  auto it = params.find("lagrangian");
  std::string lag = it == params.end() ? free_particle : it->second;

  ModelBundle b;
  b.name = "nonautonomous";
  auto slots = jet_slots(d);
  b.theory = std::make_shared<FieldTheory>(d, parse_in(lag, d, slots));
  const bool is_free = b.theory->lagrangian() == Expr::parse(free_particle);

  std::shared_ptr<ExplicitHamiltonian> closed;
  if (auto h = params.find("hamiltonian"); h != params.end())
    closed = std::make_shared<ExplicitHamiltonian>(d, parse_in(h->second, d, momentum_slots(d)));
  else if (is_free)
    closed = std::make_shared<ExplicitHamiltonian>(d, "0.5*p1_1^2");
  finish_hamiltonians(b, closed, 0.0);
  b.F = LagCoefficients::solved(d);
  b.G = HamCoefficients::solved(d);

  if (is_free) {
    const Expr t = var("x1"), q = var("u1");
    for (double c : {0.0, 1.0, -0.5}) {
      FieldPtr W = make_expr_field(d, {num(c) * q - num(0.5 * c * c) * t});
      for (Side side : {Side::Lagrangian, Side::Hamiltonian})
        b.solutions.push_back({"free", "free" + tag({c}), side, make_expr_field(d, {num(c)}), W});
    }
    for (Side side : {Side::Lagrangian, Side::Hamiltonian}) {
      CompleteSolutionFamily f;
      f.side = side;
      f.dims = d;
      f.components = {var("lam1")};
      f.lambda_grid = box({{"lam1", -2, 2, 9}});
      b.complete.push_back(f);
    }
  }

  b.grid = box({{"x1", 0, 1, 21}, {"u1", -1, 1, 21}});
  b.jet_grid = box({{"x1", 0, 1, 3}, {"u1", -1, 1, 3}, {"v1_1", -2, 2, 41}});
  b.tolerance = 1e-9;
  return b;
}

}  // namespace

// ---------------------------------------------------------------------------
// Quadratic
// ---------------------------------------------------------------------------

QuadraticParams QuadraticParams::harmonic() {
  QuadraticParams q;
  q.dims = {1, 1};
  q.g = {num(1)};
  q.gamma = {num(0)};
  q.V = Expr::parse("-0.5*u1^2");
  return q;
}

QuadraticParams QuadraticParams::from_strings(const ModelParams& params) {
  QuadraticParams q;
  auto get_int = [&](const char* key, int fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    try {
      std::size_t used = 0;
      int v = std::stoi(it->second, &used);
      if (used != it->second.size() || v < 1) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw InvalidParams(std::string("quadratic parameter ") + key + " must be a positive integer");
    }
  };
  q.dims = {get_int("m", 1), get_int("n", 1)};
  const Dimensions d = q.dims;
  const int m = d.m, n = d.n;
  auto base = base_slots(d);
  std::vector<std::string> xs(base.begin(), base.begin() + m);

  q.g.assign(static_cast<std::size_t>(n * m * n * m), num(0));
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < m; ++i) q.g[q.g_index(a, i, a, i)] = num(1);
  q.gamma.assign(static_cast<std::size_t>(n * m), num(0));
  std::string V;
  for (int a = 0; a < n; ++a) V += "-0.5*" + u_name(a) + "^2";
  q.V = Expr::parse(V);

  for (const auto& [key, value] : params) {
    if (key == "m" || key == "n") continue;
    if (key == "V") {
      q.V = parse_in(value, d, base);
      continue;
    }
    int a, i, b, j;
    char tail;
    if (std::sscanf(key.c_str(), "g%d_%d_%d_%d%c", &a, &i, &b, &j, &tail) == 4 && a >= 1 && a <= n && b >= 1 &&
        b <= n && i >= 1 && i <= m && j >= 1 && j <= m) {
      q.g[q.g_index(a - 1, i - 1, b - 1, j - 1)] = parse_in(value, d, base);
      continue;
    }
    if (std::sscanf(key.c_str(), "gamma%d_%d%c", &a, &i, &tail) == 2 && a >= 1 && a <= n && i >= 1 && i <= m) {
      q.gamma[static_cast<std::size_t>((a - 1) * m + (i - 1))] = parse_in(value, d, xs);
      continue;
    }
    throw InvalidParams("model 'quadratic' has no parameter '" + key + "'");
  }
  return q;
}

ModelBundle quadratic_model(const QuadraticParams& q) {
  const Dimensions d = q.dims;
  const int m = d.m, n = d.n, k = d.jets();
  if (m < 1 || n < 1) throw InvalidParams("quadratic model needs m, n >= 1");
  if (q.g.size() != static_cast<std::size_t>(k * k) || q.gamma.size() != static_cast<std::size_t>(k))
    throw InvalidParams("quadratic model: g needs (nm)^2 and Gamma nm entries");

  auto base = base_slots(d);
  std::vector<CompiledExpr> g;
  for (const auto& e : q.g) g.emplace_back(e, base);

  // Symmetry g^{ij}_{AB} = g^{ji}_{BA} and invertibility on random samples of [-1, 1].
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> pt(base.size());
  for (int sample = 0; sample < 16; ++sample) {
    for (auto& v : pt) v = unit(rng);
    Matrix M(k, k);
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < m; ++i)
        for (int b = 0; b < n; ++b)
          for (int j = 0; j < m; ++j) M(a * m + i, b * m + j) = g[q.g_index(a, i, b, j)].eval(pt);
    if (!M.isApprox(M.transpose(), 1e-12) && (M - M.transpose()).lpNorm<Eigen::Infinity>() > 1e-12)
      throw InvalidParams("quadratic model: g is not symmetric (g^{ij}_{AB} != g^{ji}_{BA})");
    if (std::abs(M.determinant()) < 1e-12) throw InvalidParams("quadratic model: g is singular on the working domain");
  }

  // L = 1/2 g (v - Gamma)(v - Gamma) + V
  std::vector<Expr> w(k);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < m; ++i) {
      const Expr& gam = q.gamma[a * m + i];
      Expr v = var(v_name(a, i));
      w[a * m + i] = gam.is_constant_value() && gam == num(0) ? v : v - gam;
    }
  Expr quad = num(0);
  bool first = true;
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) {
      const Expr& coef = q.g[q.g_index(r / m, r % m, c / m, c % m)];
      if (coef == num(0)) continue;
      Expr term = r == c ? sq(w[r]) : w[r] * w[c];
      if (!(coef == num(1))) term = coef * term;
      quad = first ? term : quad + term;
      first = false;
    }
  ModelBundle b;
  b.name = "quadratic";
  b.theory = std::make_shared<FieldTheory>(d, num(0.5) * quad + q.V);

  bool constant_g = true;
  for (const auto& e : q.g) constant_g = constant_g && e.variables().empty();
  std::shared_ptr<ExplicitHamiltonian> closed;
  if (constant_g) {
    // H = 1/2 gtilde p p + p . Gamma - V
    Matrix M(k, k);
    std::vector<double> none(base.size(), 0.0);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) M(r, c) = g[q.g_index(r / m, r % m, c / m, c % m)].eval(none);
    Matrix gt = M.inverse();
    Expr hq = num(0);
    bool hfirst = true;
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) {
        if (std::abs(gt(r, c)) < 1e-15) continue;
        Expr pr = var(p_name(r / m, r % m)), pc = var(p_name(c / m, c % m));
        Expr term = r == c ? sq(pr) : pr * pc;
        if (gt(r, c) != 1.0) term = num(gt(r, c)) * term;
        hq = hfirst ? term : hq + term;
        hfirst = false;
      }
    Expr h = num(0.5) * hq;
    for (int r = 0; r < k; ++r)
      if (!(q.gamma[r] == num(0))) h = h + var(p_name(r / m, r % m)) * q.gamma[r];
    h = h - q.V;
    closed = std::make_shared<ExplicitHamiltonian>(d, h);
  }
  finish_hamiltonians(b, closed, 0.0);
  if (m == 1) {
    b.F = LagCoefficients::solved(d);
    b.G = HamCoefficients::solved(d);
  } else {
    b.F = LagCoefficients::induced(d);
    b.G = HamCoefficients::induced(d);
  }

  const QuadraticParams h = QuadraticParams::harmonic();
  const bool harmonic = d == h.dims && q.g[0] == h.g[0] && q.gamma[0] == h.gamma[0] && q.V == h.V;
  if (harmonic) {
    const Expr t = var("x1"), u = var("u1");
    for (double E : {0.5, 1.0, 2.0}) {
      // psi = s = sqrt(2E - q^2), W = -E t + (q/2) sqrt(2E - q^2) + E asin(q / sqrt(2E))
      Expr root = call(UnaryOp::Sqrt, num(2 * E) - sq(u));
      Expr W = -(num(E) * t) + u / num(2) * root + num(E) * call(UnaryOp::Asin, u / num(std::sqrt(2 * E)));
      FieldPtr Wf = make_expr_field(d, {W});
      for (Side side : {Side::Lagrangian, Side::Hamiltonian})
        b.solutions.push_back({"energy", "energy" + tag({E}), side, make_expr_field(d, {root}), Wf});
    }
    for (Side side : {Side::Lagrangian, Side::Hamiltonian}) {
      CompleteSolutionFamily f;
      f.side = side;
      f.dims = d;
      f.components = {Expr::parse("sqrt(2*lam1-u1^2)")};
      f.lambda_grid = box({{"lam1", 0.5, 2, 7}});
      b.complete.push_back(f);
    }
  }

  const std::size_t count = m + n <= 2 ? 21 : 9;
  for (int i = 0; i < m; ++i) b.grid.axes.push_back({x_name(i), 0, 1, count});
  for (int a = 0; a < n; ++a) b.grid.axes.push_back({u_name(a), -0.9, 0.9, count});
  b.jet_grid = b.grid;
  for (auto& a : b.jet_grid.axes) a.count = 3;
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < m; ++i) b.jet_grid.axes.push_back({v_name(a, i), -2, 2, k <= 2 ? std::size_t{21} : 5});
  b.tolerance = 1e-9;
  return b;
}

// ---------------------------------------------------------------------------

std::vector<std::string> builtin_names() { return {"nonautonomous", "quadratic", "minimal_surface"}; }

ModelBundle builtin(const std::string& name, const ModelParams& params) {
  if (name == "minimal_surface") return minimal_surface(params);
  if (name == "nonautonomous") return nonautonomous(params);
  if (name == "quadratic") return quadratic_model(QuadraticParams::from_strings(params));
  throw UnknownModel("unknown model '" + name + "' (expected nonautonomous, quadratic or minimal_surface)");
}

Expr classic_hj_equation(const ModelBundle& model) {
  if (!model.closed_form) throw InvalidParams("model '" + model.name + "' has no closed-form Hamiltonian");
  const Dimensions d = model.theory->dims();
  std::map<std::string, Expr> subs;
  for (int a = 0; a < d.n; ++a)
    for (int i = 0; i < d.m; ++i)
      subs[p_name(a, i)] = var("dW" + std::to_string(i + 1) + "_du" + std::to_string(a + 1));
  Expr div = var("dW1_dx1");
  for (int i = 1; i < d.m; ++i) div = div + var("dW" + std::to_string(i + 1) + "_dx" + std::to_string(i + 1));
  return div + model.closed_form->expression().substituted(subs);
}

}  // namespace mshj
