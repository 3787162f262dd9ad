#include "mshj/fields.hpp"

#include <algorithm>
#include <cmath>

namespace mshj {

ExprField::ExprField(Dimensions dims, std::vector<Expr> components) : dims_(dims), exprs_(std::move(components)) {
  auto slots = base_slots(dims_);
  compiled_.reserve(exprs_.size());
  for (const auto& e : exprs_) {
    for (const auto& name : e.variables())
      if (std::find(slots.begin(), slots.end(), name) == slots.end())
        throw ConfigError("field component '" + e.str() + "' references '" + name +
                          "', which is not an x or u coordinate");
    compiled_.emplace_back(e, slots);
  }
}

FieldJet ExprField::jet(const Vector& x, const Vector& u, int order) const {
  const int m = dims_.m, n = dims_.n;
  const std::size_t K = compiled_.size();
  std::vector<double> s(x.data(), x.data() + m);
  s.insert(s.end(), u.data(), u.data() + n);
  FieldJet j;
  j.value.resize(K);
  if (order >= 1) {
    j.dx.resize(K, m);
    j.du.resize(K, n);
  }
  if (order >= 2) j.second.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    if (order == 0) {
      j.value[k] = compiled_[k].eval(s);
      continue;
    }
    Derivatives d = order >= 2 ? compiled_[k].hessian(s) : compiled_[k].gradient(s);
    j.value[k] = d.value;
    j.dx.row(k) = d.gradient.segment(0, m).transpose();
    j.du.row(k) = d.gradient.segment(m, n).transpose();
    if (order >= 2) j.second[k] = d.hessian;
  }
  return j;
}

FieldPtr make_expr_field(Dimensions dims, const std::vector<std::string>& components) {
  auto slots = base_slots(dims);
  std::vector<Expr> exprs;
  exprs.reserve(components.size());
  for (const auto& c : components) exprs.push_back(parse_in(c, dims, slots));
  return std::make_shared<ExprField>(dims, std::move(exprs));
}

FieldPtr make_expr_field(Dimensions dims, std::vector<Expr> components) {
  return std::make_shared<ExprField>(dims, std::move(components));
}

void fd_second_derivatives(const SectionFunction& f, const Vector& x, const Vector& u, FieldJet& jet) {
  const Dimensions d = f.dims();
  const int m = d.m, n = d.n, b = m + n;
  const std::size_t K = f.size();
  std::vector<Matrix> H(K, Matrix::Zero(b, b));
  for (int c = 0; c < b; ++c) {
    Vector xp = x, xm = x, up = u, um = u;
    double base = c < m ? x[c] : u[c - m];
    double h = 1e-5 * std::max(1.0, std::abs(base));
    if (c < m) {
      xp[c] += h;
      xm[c] -= h;
    } else {
      up[c - m] += h;
      um[c - m] -= h;
    }
    FieldJet jp = f.jet(xp, up, 1);
    FieldJet jm = f.jet(xm, um, 1);
    for (std::size_t k = 0; k < K; ++k) {
      for (int r = 0; r < m; ++r) H[k](r, c) = (jp.dx(k, r) - jm.dx(k, r)) / (2 * h);
      for (int r = 0; r < n; ++r) H[k](m + r, c) = (jp.du(k, r) - jm.du(k, r)) / (2 * h);
    }
  }
  for (auto& h : H) h = 0.5 * (h + h.transpose()).eval();
  jet.second = std::move(H);
}

void split_base_point(Dimensions d, std::span<const double> point, Vector& x, Vector& u) {
  x.resize(d.m);
  u.resize(d.n);
  for (int i = 0; i < d.m; ++i) x[i] = point[i];
  for (int a = 0; a < d.n; ++a) u[a] = point[d.m + a];
}

}  // namespace mshj
