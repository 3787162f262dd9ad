#pragma once

#include <cstdint>
#include <optional>

#include "mshj/ham_residuals.hpp"
#include "mshj/lag_residuals.hpp"
#include "mshj/legendre.hpp"

namespace mshj {

/// s = Leg o Psi: s_A^i(x, u) = dL/dv(A,i) at v = psi(x, u). First
/// derivatives by the chain rule, second derivatives by central differences.
class PushforwardField final : public SectionFunction {
 public:
  PushforwardField(std::shared_ptr<const FieldTheory> theory, FieldPtr psi);

  Dimensions dims() const override { return theory_->dims(); }
  std::size_t size() const override { return psi_->size(); }
  FieldJet jet(const Vector& x, const Vector& u, int order) const override;

 private:
  std::shared_ptr<const FieldTheory> theory_;
  FieldPtr psi_;
};

/// Psi = Leg^{-1} o s, one Newton solve per evaluation. dpsi/dz =
/// L_vv^{-1} (ds/dz - L_vz).
class PullbackField final : public SectionFunction {
 public:
  PullbackField(std::shared_ptr<const FieldTheory> theory, FieldPtr s, NewtonSettings settings = {});

  Dimensions dims() const override { return theory_->dims(); }
  std::size_t size() const override { return s_->size(); }
  FieldJet jet(const Vector& x, const Vector& u, int order) const override;

 private:
  std::shared_ptr<const FieldTheory> theory_;
  FieldPtr s_;
  NewtonSettings settings_;
};

FieldPtr pushforward_jetfield(std::shared_ptr<const FieldTheory> theory, FieldPtr psi);
FieldPtr pullback_section(std::shared_ptr<const FieldTheory> theory, FieldPtr s, NewtonSettings settings = {});

enum class Verdict { PassPass, FailFail, Mixed };
const char* verdict_name(Verdict v);

struct EquivalenceReport {
  ResidualReport lagrangian;
  ResidualReport hamiltonian;
  Verdict verdict = Verdict::Mixed;
  /// Pointwise: Hamiltonian max <= 10 * Lagrangian max + 1e-10.
  bool transport_consistent = false;
  double worst_transport_excess = 0.0;  // max of ham - (10 lag + 1e-10)
  std::vector<double> worst_transport_point;
};

/// Runs the standard suite (and the classic suite when W is given) on Psi and
/// on Leg o Psi over the same (x, u) grid.
EquivalenceReport equivalence_report(std::shared_ptr<const FieldTheory> theory, HamiltonianPtr h, FieldPtr psi,
                                     const LagCoefficients& F, const HamCoefficients& G, const GridSpec& grid,
                                     double tol, FieldPtr W = nullptr, SweepOptions options = {});

/// mn-parameter family of candidates, components over lam1..lamK, x, u.
struct CompleteSolutionFamily {
  enum class Side { Lagrangian, Hamiltonian };

  Side side = Side::Lagrangian;
  Dimensions dims;
  std::vector<Expr> components;
  GridSpec lambda_grid;             // axes lam1..lamK
  std::optional<Expr> constraint;   // over lam: samples kept where >= 0

  std::vector<std::string> lambda_names() const;
  /// The slice at fixed lambda, as an expression field over (x, u).
  FieldPtr slice(std::span<const double> lambda) const;
};

struct CompleteCheckSettings {
  double tol = 1e-9;      // slice residual tolerance
  double det_tol = 1e-9;  // |det dPhi/dlambda| must exceed this
  std::size_t probes = 100;
  std::uint64_t seed = 20240611;
  SweepOptions sweep;
};

struct CompleteSolutionReport {
  std::size_t slices = 0;
  std::size_t slices_passed = 0;
  double worst_slice_residual = 0.0;
  std::vector<double> worst_slice_lambda;
  double min_abs_det = 0.0;
  double max_abs_det = 0.0;
  std::size_t det_samples = 0;
  std::size_t probes = 0;
  std::size_t probes_hit = 0;
  double worst_probe_error = 0.0;
  bool pass = false;
};

/// (a) every lambda slice passes the generalized and standard suites of its
/// side; (b) |det dPhi/dlambda| > det_tol at every (lambda, x, u) sample, else
/// DegenerateJacobian; (c) Newton on lambda recovers random targets
/// Phi(lambda*, x, u) to 1e-8, else CoverageMiss.
CompleteSolutionReport complete_solution_check(std::shared_ptr<const FieldTheory> theory, HamiltonianPtr h,
                                               const CompleteSolutionFamily& family, const LagCoefficients& F,
                                               const HamCoefficients& G, const GridSpec& xu_grid,
                                               const CompleteCheckSettings& settings = {});

}  // namespace mshj
