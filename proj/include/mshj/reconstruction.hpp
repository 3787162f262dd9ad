#pragma once

// Reconstruction of field sections phi(x) from a jet field by integrating
// d phi^A / dx^i = psi_i^A(x, phi(x)) over a box of base points.
//
// For m >= 2 the box is swept one axis at a time: the line through x0 along
// order[0] is integrated first, every node found so far then seeds lines
// along order[1], and so on. If the associated distribution is involutive
// the result does not depend on the order.

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "mshj/fields.hpp"

namespace mshj {

struct SectionTrace {
  Dimensions dims;
  GridSpec grid;       // axes x1..xm, row-major nodes
  Matrix values;       // nodes x n
  std::vector<int> order;
  std::vector<double> step;  // per axis
  std::string method = "rk4";

  std::size_t nodes() const { return static_cast<std::size_t>(values.rows()); }
  /// Node index from per-axis indices.
  std::size_t index(std::span<const std::size_t> idx) const;
  void write_csv(std::ostream& os) const;
};

/// Box axes must be named x1..xm; x0 must be a grid node (within 1e-9 of the
/// spacing). Throws BlowUp when |u| exceeds 1e6.
SectionTrace integrate_distribution(const SectionFunction& psi, const GridSpec& box, std::span<const double> x0,
                                    const Vector& u0, std::vector<int> order = {});

/// Samples a known section phi(x) on the box (no integration).
SectionTrace sample_section(Dimensions dims, const GridSpec& box, const std::function<Vector(const Vector&)>& phi);

struct TraceResidual {
  double max_abs = 0.0;
  std::vector<double> argmax;  // base point
  std::size_t argmax_node = 0;
  std::size_t points = 0;      // interior nodes evaluated
  std::vector<double> pointwise;  // per node max |r|, NaN on the boundary
};

struct PathIndependence {
  double discrepancy = 0.0;
  std::vector<double> argmax;
  bool pass = false;
};

/// max over the box of |phi_order - phi_reversed| (m >= 2).
PathIndependence path_independence_check(const SectionFunction& psi, const GridSpec& box,
                                         std::span<const double> x0, const Vector& u0, double tol);

/// Central differences of phi minus psi(x, phi(x)), interior nodes only.
TraceResidual holonomy_residual(const SectionTrace& trace, const SectionFunction& psi);

/// Euler-Lagrange equations along j^1 phi with first and second derivatives
/// of phi by central differences, interior nodes only.
TraceResidual el_section_residual(const FieldTheory& theory, const SectionTrace& trace);

/// Box with `steps` intervals per axis on [lo_i, hi_i].
GridSpec make_box(std::span<const double> lo, std::span<const double> hi, std::size_t steps);

}  // namespace mshj
