#include "mshj/jet_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mshj {

std::string x_name(int i) { return "x" + std::to_string(i + 1); }
std::string u_name(int alpha) { return "u" + std::to_string(alpha + 1); }
std::string v_name(int alpha, int i) { return "v" + std::to_string(alpha + 1) + "_" + std::to_string(i + 1); }
std::string p_name(int alpha, int i) { return "p" + std::to_string(alpha + 1) + "_" + std::to_string(i + 1); }

std::vector<std::string> base_slots(Dimensions d) {
  std::vector<std::string> s;
  for (int i = 0; i < d.m; ++i) s.push_back(x_name(i));
  for (int a = 0; a < d.n; ++a) s.push_back(u_name(a));
  return s;
}

std::vector<std::string> jet_slots(Dimensions d) {
  auto s = base_slots(d);
  for (int a = 0; a < d.n; ++a)
    for (int i = 0; i < d.m; ++i) s.push_back(v_name(a, i));
  return s;
}

std::vector<std::string> momentum_slots(Dimensions d) {
  auto s = base_slots(d);
  for (int a = 0; a < d.n; ++a)
    for (int i = 0; i < d.m; ++i) s.push_back(p_name(a, i));
  return s;
}

std::map<std::string, std::string> coordinate_aliases(Dimensions d) {
  std::map<std::string, std::string> a;
  if (d.m == 1) a["t"] = "x1";
  if (d.m == 2 || d.m == 3) {
    a["x"] = "x1";
    a["y"] = "x2";
  }
  if (d.m == 3) a["z"] = "x3";
  if (d.n == 1) {
    a["q"] = "u1";
    a["u"] = "u1";
  }
  if (d.m == 1 && d.n == 1) {
    a["v"] = "v1_1";
    a["p"] = "p1_1";
  }
  return a;
}

Expr parse_in(std::string_view text, Dimensions d, std::span<const std::string> allowed) {
  Expr e = Expr::parse(text).renamed(coordinate_aliases(d));
  for (const auto& name : e.variables()) {
    if (std::find(allowed.begin(), allowed.end(), name) == allowed.end())
      throw ConfigError("variable '" + name + "' is not a coordinate here (in '" + std::string(text) + "')");
  }
  return e;
}

JetPoint JetPoint::zeros(Dimensions d) {
  return {Vector::Zero(d.m), Vector::Zero(d.n), Matrix::Zero(d.n, d.m)};
}

std::vector<double> JetPoint::slots() const {
  std::vector<double> s(x.data(), x.data() + x.size());
  s.insert(s.end(), u.data(), u.data() + u.size());
  for (Eigen::Index a = 0; a < v.rows(); ++a)
    for (Eigen::Index i = 0; i < v.cols(); ++i) s.push_back(v(a, i));
  return s;
}

RestrictedMomentumPoint RestrictedMomentumPoint::zeros(Dimensions d) {
  return {Vector::Zero(d.m), Vector::Zero(d.n), Matrix::Zero(d.n, d.m)};
}

std::vector<double> RestrictedMomentumPoint::slots() const {
  std::vector<double> s(x.data(), x.data() + x.size());
  s.insert(s.end(), u.data(), u.data() + u.size());
  for (Eigen::Index a = 0; a < p.rows(); ++a)
    for (Eigen::Index i = 0; i < p.cols(); ++i) s.push_back(p(a, i));
  return s;
}

Vector flatten(const Matrix& block) {
  Vector f(block.size());
  for (Eigen::Index a = 0; a < block.rows(); ++a)
    for (Eigen::Index i = 0; i < block.cols(); ++i) f[a * block.cols() + i] = block(a, i);
  return f;
}

Matrix unflatten(const Vector& flat, Dimensions d) {
  Matrix b(d.n, d.m);
  for (int a = 0; a < d.n; ++a)
    for (int i = 0; i < d.m; ++i) b(a, i) = flat[d.flat(a, i)];
  return b;
}

JetPoint jet_point_from_slots(Dimensions d, std::span<const double> s) {
  JetPoint pt = JetPoint::zeros(d);
  for (int i = 0; i < d.m; ++i) pt.x[i] = s[i];
  for (int a = 0; a < d.n; ++a) pt.u[a] = s[d.m + a];
  for (int a = 0; a < d.n; ++a)
    for (int i = 0; i < d.m; ++i) pt.v(a, i) = s[d.m + d.n + d.flat(a, i)];
  return pt;
}

// ---------------------------------------------------------------------------

FieldTheory::FieldTheory(Dimensions dims, Expr lagrangian) : dims_(dims), expr_(std::move(lagrangian)) {
  if (dims_.m < 1 || dims_.n < 1) throw InvalidParams("field theory needs m >= 1 and n >= 1");
  auto slots = jet_slots(dims_);
  for (const auto& name : expr_.variables())
    if (std::find(slots.begin(), slots.end(), name) == slots.end())
      throw ConfigError("Lagrangian references undeclared coordinate '" + name + "'");
  compiled_ = CompiledExpr(expr_, slots);
}

FieldTheory::FieldTheory(Dimensions dims, std::string_view lagrangian)
    : FieldTheory(dims, Expr::parse(lagrangian).renamed(coordinate_aliases(dims))) {}

double FieldTheory::value(const JetPoint& pt) const { return compiled_.eval(pt.slots()); }

LagrangianJet FieldTheory::jet(const JetPoint& pt, int order) const {
  const int m = dims_.m, n = dims_.n, k = dims_.jets();
  auto s = pt.slots();
  LagrangianJet j;
  Derivatives d = order >= 2 ? compiled_.hessian(s) : compiled_.gradient(s);
  j.value = d.value;
  j.dx = d.gradient.segment(0, m);
  j.du = d.gradient.segment(m, n);
  j.dv = d.gradient.segment(m + n, k);
  if (order >= 2) {
    j.vv = d.hessian.block(m + n, m + n, k, k);
    j.vx = d.hessian.block(m + n, 0, k, m);
    j.vu = d.hessian.block(m + n, m, k, n);
  }
  return j;
}

Matrix hessian(const FieldTheory& theory, const JetPoint& pt) { return theory.jet(pt, 2).vv; }

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

double Axis::at(std::size_t k) const {
  if (count <= 1) return 0.5 * (lo + hi);
  if (k + 1 == count) return hi;
  return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
}

void GridSpec::validate() const {
  for (const auto& a : axes) {
    if (!(a.lo <= a.hi)) throw InvalidParams("axis " + a.name + ": lo > hi");
    if (a.count < 1) throw InvalidParams("axis " + a.name + ": count must be >= 1");
  }
}

std::size_t GridSpec::size() const {
  std::size_t total = 1;
  for (const auto& a : axes) {
    if (a.count != 0 && total > std::numeric_limits<std::size_t>::max() / a.count) throw CapExceeded(total, cap);
    total *= a.count;
  }
  if (total > cap) throw CapExceeded(total, cap);
  return total;
}

void GridSpec::point(std::size_t index, std::span<double> out) const {
  for (std::size_t k = axes.size(); k-- > 0;) {
    const Axis& a = axes[k];
    out[k] = a.at(index % a.count);
    index /= a.count;
  }
}

GridSpec GridSpec::scaled(std::size_t factor) const {
  GridSpec g = *this;
  if (factor <= 1) return g;
  for (auto& a : g.axes)
    if (a.count > 1) a.count = (a.count - 1) * factor + 1;
  return g;
}

std::vector<std::vector<double>> grid_points(const GridSpec& grid) {
  grid.validate();
  std::size_t total = grid.size();
  std::vector<std::vector<double>> pts(total, std::vector<double>(grid.axes.size()));
  for (std::size_t k = 0; k < total; ++k) grid.point(k, pts[k]);
  return pts;
}

RegularityReport regularity_check(const FieldTheory& theory, const GridSpec& grid, double tol) {
  const Dimensions d = theory.dims();
  if (grid.axes.size() != static_cast<std::size_t>(d.m + d.n + d.jets()))
    throw InvalidParams("regularity grid must cover (x, u, v)");
  grid.validate();
  RegularityReport r;
  r.points = grid.size();
  r.min_abs_det = std::numeric_limits<double>::infinity();
  std::vector<double> s(grid.axes.size());
  for (std::size_t k = 0; k < r.points; ++k) {
    grid.point(k, s);
    double det = std::abs(hessian(theory, jet_point_from_slots(d, s)).determinant());
    if (det < r.min_abs_det) {
      r.min_abs_det = det;
      r.argmin = s;
    }
  }
  r.regular = r.min_abs_det > tol;
  return r;
}

}  // namespace mshj
