#include "mshj/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mshj {

namespace {

constexpr double kBlowUp = 1e6;

std::vector<std::size_t> unravel(const GridSpec& g, std::size_t k) {
  std::vector<std::size_t> idx(g.axes.size());
  for (std::size_t a = g.axes.size(); a-- > 0;) {
    idx[a] = k % g.axes[a].count;
    k /= g.axes[a].count;
  }
  return idx;
}

double spacing(const Axis& a) { return a.count > 1 ? (a.hi - a.lo) / static_cast<double>(a.count - 1) : 0.0; }

Vector node_x(const GridSpec& g, std::span<const std::size_t> idx) {
  Vector x(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t a = 0; a < idx.size(); ++a) x[static_cast<Eigen::Index>(a)] = g.axes[a].at(idx[a]);
  return x;
}

void check_box(Dimensions d, const GridSpec& box) {
  if (box.axes.size() != static_cast<std::size_t>(d.m)) throw InvalidParams("integration box must have m axes");
  box.validate();
}

}  // namespace

std::size_t SectionTrace::index(std::span<const std::size_t> idx) const {
  std::size_t k = 0;
  for (std::size_t a = 0; a < grid.axes.size(); ++a) k = k * grid.axes[a].count + idx[a];
  return k;
}

void SectionTrace::write_csv(std::ostream& os) const {
  const int m = dims.m, n = dims.n;
  for (int i = 0; i < m; ++i) os << (i ? "," : "") << x_name(i);
  for (int a = 0; a < n; ++a) os << "," << u_name(a);
  os << '\n';
  auto flags = os.flags();
  auto prec = os.precision();
  os.precision(17);
  std::vector<double> x(m);
  for (std::size_t k = 0; k < nodes(); ++k) {
    grid.point(k, x);
    for (int i = 0; i < m; ++i) os << (i ? "," : "") << x[i];
    for (int a = 0; a < n; ++a) os << "," << values(static_cast<Eigen::Index>(k), a);
    os << '\n';
  }
  os.flags(flags);
  os.precision(prec);
}

GridSpec make_box(std::span<const double> lo, std::span<const double> hi, std::size_t steps) {
  GridSpec g;
  for (std::size_t i = 0; i < lo.size(); ++i) g.axes.push_back({x_name(static_cast<int>(i)), lo[i], hi[i], steps + 1});
  return g;
}

SectionTrace integrate_distribution(const SectionFunction& psi, const GridSpec& box, std::span<const double> x0,
                                    const Vector& u0, std::vector<int> order) {
  const Dimensions d = psi.dims();
  const int m = d.m, n = d.n;
  check_box(d, box);
  if (x0.size() != static_cast<std::size_t>(m) || u0.size() != n) throw InvalidParams("x0 / u0 have the wrong size");
  if (order.empty()) {
    order.resize(m);
    std::iota(order.begin(), order.end(), 0);
  }
  {
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < m; ++i)
      if (static_cast<int>(sorted.size()) != m || sorted[i] != i) throw InvalidParams("sweep order must permute the axes");
  }

  SectionTrace trace;
  trace.dims = d;
  trace.grid = box;
  trace.order = order;
  const std::size_t total = box.size();
  trace.values = Matrix::Constant(static_cast<Eigen::Index>(total), n, std::numeric_limits<double>::quiet_NaN());

  std::vector<std::size_t> idx0(m);
  for (int a = 0; a < m; ++a) {
    const Axis& ax = box.axes[a];
    double h = spacing(ax);
    trace.step.push_back(h);
    if (ax.count == 1) continue;
    double t = (x0[a] - ax.lo) / h;
    double r = std::round(t);
    if (std::abs(t - r) > 1e-9 || r < 0 || r > static_cast<double>(ax.count - 1))
      throw InvalidParams("x0 must be a node of the integration box");
    idx0[a] = static_cast<std::size_t>(r);
  }
  trace.values.row(static_cast<Eigen::Index>(trace.index(idx0))) = u0.transpose();

  auto rhs = [&](const Vector& x, const Vector& u, int axis) {
    Vector v = psi.value(x, u);
    Vector out(n);
    for (int a = 0; a < n; ++a) out[a] = v[a * m + axis];
    return out;
  };
  auto check = [&](const Vector& u, const Vector& x) {
    if (!u.allFinite() || u.lpNorm<Eigen::Infinity>() > kBlowUp) {
      std::string where;
      for (int i = 0; i < m; ++i) where += (i ? ", " : "") + std::to_string(x[i]);
      throw BlowUp("reconstructed section exceeds |u| = 1e6 near x = (" + where + ")");
    }
  };

  for (int stage = 0; stage < m; ++stage) {
    const int axis = order[stage];
    const Axis& ax = box.axes[axis];
    const double h = trace.step[axis];
    for (std::size_t k = 0; k < total; ++k) {
      auto idx = unravel(box, k);
      if (idx[axis] != idx0[axis]) continue;
      bool seed = true;
      for (int later = stage + 1; later < m; ++later)
        if (idx[order[later]] != idx0[order[later]]) seed = false;
      if (!seed) continue;
      for (int dir : {+1, -1}) {
        auto cur = idx;
        Vector u = trace.values.row(static_cast<Eigen::Index>(k)).transpose();
        for (;;) {
          if (dir > 0 && cur[axis] + 1 >= ax.count) break;
          if (dir < 0 && cur[axis] == 0) break;
          Vector x = node_x(box, cur);
          const double s = dir * h;
          Vector k1 = rhs(x, u, axis);
          Vector xm = x;
          xm[axis] += 0.5 * s;
          Vector k2 = rhs(xm, u + 0.5 * s * k1, axis);
          Vector k3 = rhs(xm, u + 0.5 * s * k2, axis);
          Vector xe = x;
          xe[axis] += s;
          Vector k4 = rhs(xe, u + s * k3, axis);
          u += (s / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
          cur[axis] = dir > 0 ? cur[axis] + 1 : cur[axis] - 1;
          check(u, xe);
          trace.values.row(static_cast<Eigen::Index>(trace.index(cur))) = u.transpose();
        }
      }
    }
  }
  return trace;
}

SectionTrace sample_section(Dimensions dims, const GridSpec& box, const std::function<Vector(const Vector&)>& phi) {
  check_box(dims, box);
  SectionTrace trace;
  trace.dims = dims;
  trace.grid = box;
  trace.method = "sampled";
  for (const auto& a : box.axes) trace.step.push_back(spacing(a));
  const std::size_t total = box.size();
  trace.values.resize(static_cast<Eigen::Index>(total), dims.n);
  std::vector<double> x(dims.m);
  for (std::size_t k = 0; k < total; ++k) {
    box.point(k, x);
    Vector xv = Eigen::Map<const Vector>(x.data(), dims.m);
    trace.values.row(static_cast<Eigen::Index>(k)) = phi(xv).transpose();
  }
  return trace;
}

PathIndependence path_independence_check(const SectionFunction& psi, const GridSpec& box,
                                         std::span<const double> x0, const Vector& u0, double tol) {
  const int m = psi.dims().m;
  if (m < 2) throw InvalidParams("path independence needs m >= 2");
  std::vector<int> forward(m), reversed(m);
  std::iota(forward.begin(), forward.end(), 0);
  std::copy(forward.rbegin(), forward.rend(), reversed.begin());
  SectionTrace a = integrate_distribution(psi, box, x0, u0, forward);
  SectionTrace b = integrate_distribution(psi, box, x0, u0, reversed);
  PathIndependence out;
  std::size_t worst = 0;
  for (std::size_t k = 0; k < a.nodes(); ++k) {
    double diff = (a.values.row(static_cast<Eigen::Index>(k)) - b.values.row(static_cast<Eigen::Index>(k)))
                      .lpNorm<Eigen::Infinity>();
    if (diff > out.discrepancy) {
      out.discrepancy = diff;
      worst = k;
    }
  }
  out.argmax.resize(m);
  box.point(worst, out.argmax);
  out.pass = out.discrepancy < tol;
  return out;
}

namespace {

template <typename F>
TraceResidual interior_sweep(const SectionTrace& trace, F&& residual_at) {
  const GridSpec& g = trace.grid;
  TraceResidual out;
  out.pointwise.assign(trace.nodes(), std::numeric_limits<double>::quiet_NaN());
  for (const auto& a : g.axes)
    if (a.count < 3) return out;
  out.max_abs = 0.0;
  for (std::size_t k = 0; k < trace.nodes(); ++k) {
    auto idx = unravel(g, k);
    bool interior = true;
    for (std::size_t a = 0; a < idx.size(); ++a)
      if (idx[a] == 0 || idx[a] + 1 == g.axes[a].count) interior = false;
    if (!interior) continue;
    double r = residual_at(idx);
    if (!std::isfinite(r)) r = std::numeric_limits<double>::infinity();
    out.pointwise[k] = r;
    ++out.points;
    if (r > out.max_abs || out.points == 1) {
      out.max_abs = r;
      out.argmax_node = k;
    }
  }
  out.argmax.resize(g.axes.size());
  g.point(out.argmax_node, out.argmax);
  return out;
}

}  // namespace

TraceResidual holonomy_residual(const SectionTrace& trace, const SectionFunction& psi) {
  const int m = trace.dims.m, n = trace.dims.n;
  if (psi.dims() != trace.dims) throw InvalidParams("jet field and trace dimensions differ");
  return interior_sweep(trace, [&](const std::vector<std::size_t>& idx) {
    Vector x = node_x(trace.grid, idx);
    Vector u = trace.values.row(static_cast<Eigen::Index>(trace.index(idx))).transpose();
    Vector v = psi.value(x, u);
    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
      auto up = idx, dn = idx;
      ++up[i];
      --dn[i];
      for (int a = 0; a < n; ++a) {
        double fd = (trace.values(static_cast<Eigen::Index>(trace.index(up)), a) -
                     trace.values(static_cast<Eigen::Index>(trace.index(dn)), a)) /
                    (2 * trace.step[i]);
        worst = std::max(worst, std::abs(fd - v[a * m + i]));
      }
    }
    return worst;
  });
}

TraceResidual el_section_residual(const FieldTheory& theory, const SectionTrace& trace) {
  const Dimensions d = trace.dims;
  const int m = d.m, n = d.n;
  if (theory.dims() != d) throw InvalidParams("field theory and trace dimensions differ");
  auto at = [&](const std::vector<std::size_t>& idx, int a) {
    return trace.values(static_cast<Eigen::Index>(trace.index(idx)), a);
  };
  return interior_sweep(trace, [&](const std::vector<std::size_t>& idx) {
    JetPoint pt{node_x(trace.grid, idx), Vector(n), Matrix(n, m)};
    // second[a](i, j) = d2 phi^a / dx^i dx^j
    std::vector<Matrix> second(n, Matrix(m, m));
    for (int a = 0; a < n; ++a) {
      const double c = at(idx, a);
      pt.u[a] = c;
      for (int i = 0; i < m; ++i) {
        auto up = idx, dn = idx;
        ++up[i];
        --dn[i];
        const double hi = trace.step[i];
        pt.v(a, i) = (at(up, a) - at(dn, a)) / (2 * hi);
        second[a](i, i) = (at(up, a) - 2 * c + at(dn, a)) / (hi * hi);
        for (int j = i + 1; j < m; ++j) {
          auto pp = up, pm = up, mp = dn, mm = dn;
          ++pp[j];
          --pm[j];
          ++mp[j];
          --mm[j];
          double mixed = (at(pp, a) - at(pm, a) - at(mp, a) + at(mm, a)) / (4 * hi * trace.step[j]);
          second[a](i, j) = second[a](j, i) = mixed;
        }
      }
    }
    LagrangianJet l = theory.jet(pt, 2);
    double worst = 0.0;
    for (int a = 0; a < n; ++a) {
      double r = l.du[a];
      for (int i = 0; i < m; ++i) {
        const int row = a * m + i;
        double total = l.vx(row, i);
        for (int b = 0; b < n; ++b) {
          total += l.vu(row, b) * pt.v(b, i);
          for (int j = 0; j < m; ++j) total += l.vv(row, b * m + j) * second[b](i, j);
        }
        r -= total;
      }
      worst = std::max(worst, std::abs(r));
    }
    return worst;
  });
}

}  // namespace mshj
