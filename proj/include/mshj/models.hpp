#pragma once

// Built-in models: the free non-autonomous particle (and any L(t, q, v)), the
// quadratic theory L = 1/2 g (v - Gamma)(v - Gamma) + V, and the minimal
// surface L = sqrt(1 + |v|^2), each with its known solution families.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mshj/equivalence.hpp"

namespace mshj {

using Side = CompleteSolutionFamily::Side;

/// One instance of a known solution family.
struct SolutionMember {
  std::string family;
  std::string name;
  Side side = Side::Lagrangian;
  FieldPtr candidate;  // psi or s
  FieldPtr W;          // generating form, when known in closed form
};

struct ModelBundle {
  std::string name;
  std::shared_ptr<const FieldTheory> theory;
  std::shared_ptr<const ExplicitHamiltonian> closed_form;  // may be null
  HamiltonianPtr derived;
  HamiltonianPtr hamiltonian;  // closed form if available, else derived
  LagCoefficients F = LagCoefficients::induced(Dimensions{});
  HamCoefficients G = HamCoefficients::induced(Dimensions{});
  std::vector<SolutionMember> solutions;
  std::vector<CompleteSolutionFamily> complete;
  GridSpec grid;      // standard (x, u) grid
  GridSpec jet_grid;  // (x, u, v) grid for regularity and Legendre checks
  double tolerance = 1e-9;
  double domain_guard = 0.0;  // delta of the momentum-domain guard, 0 if none
};

using ModelParams = std::map<std::string, std::string>;

std::vector<std::string> builtin_names();

/// Throws UnknownModel or InvalidParams.
ModelBundle builtin(const std::string& name, const ModelParams& params = {});

/// Quadratic-model inputs; expressions over (x, u) (g, V) and x (Gamma).
struct QuadraticParams {
  Dimensions dims;
  std::vector<Expr> g;      // flat ((A * m + i) * n + B) * m + j  ->  g^{ij}_{AB}
  std::vector<Expr> gamma;  // flat A * m + i
  Expr V;

  static QuadraticParams harmonic();
  static QuadraticParams from_strings(const ModelParams& params);
  std::size_t g_index(int a, int i, int b, int j) const { return ((a * dims.m + i) * dims.n + b) * dims.m + j; }
};

ModelBundle quadratic_model(const QuadraticParams& q);

/// sum_i dWi_dxi + H(x, u, p := dWi_duA): the classic HJ equation of a model
/// with a closed-form Hamiltonian, written over the symbols dWi_dxj, dWi_duA.
Expr classic_hj_equation(const ModelBundle& model);

}  // namespace mshj
