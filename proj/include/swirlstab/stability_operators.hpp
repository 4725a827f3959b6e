#pragma once

#include <array>
#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "swirlstab/base_flow.hpp"
#include "swirlstab/spectral_basis.hpp"

namespace swirlstab {

using cplx = std::complex<double>;

enum class Method { projection, collocation };

/// Extra equation that completes the collocation system.
enum class Closure {
  wall_continuity,  // continuity equation at the wall node
  axis_parity,      // dG/dr = 0 on the axis
};

std::string to_string(Method method);
std::string to_string(Closure closure);
/// Throws ParameterError("method" / "closure") for unknown names.
Method parse_method(const std::string& name);
Closure parse_closure(const std::string& name);

/// One spatial eigenproblem: tangential wavenumber m, real frequency omega,
/// base flow and spectral basis.
struct StabilityProblem {
  int m = -1;
  double omega = 0.0;
  std::shared_ptr<const BaseFlowProfile> flow;
  std::shared_ptr<const BasisContext> basis;
  Method method = Method::collocation;
  Closure closure = Closure::wall_continuity;

  int size() const { return basis->size(); }
  double r_wall() const { return basis->r_wall(); }

  /// Throws UnsupportedModeError for |m| != 1 and ParameterError for a
  /// missing flow/basis, non-finite omega or mismatched r_wall.
  void validate() const;
};

// Unknowns (F, G, H, P) relate to the velocity and pressure perturbations
// through G = u_r, H = i u_theta, F = i u_x, P = i p, so every operator
// coefficient is real. Operator rows are, in order, continuity, radial
// momentum, r times tangential momentum, and axial momentum.

/// Coefficient acting on one unknown: value * u + slope * du/dr.
struct OperatorEntry {
  double value = 0.0;
  double slope = 0.0;
};

/// block[row][unknown], unknowns ordered F, G, H, P.
using OperatorBlock = std::array<std::array<OperatorEntry, 4>, 4>;

/// The operator at radius r splits as k * wavenumber + omega * frequency + rest.
struct PencilBlocks {
  OperatorBlock wavenumber;
  OperatorBlock frequency;
  OperatorBlock rest;
};

PencilBlocks pencil_blocks(const BaseFlowProfile& flow, int m, double r);
PencilBlocks pencil_blocks(const StabilityProblem& problem, double r);

/// Matrix form k Xi u = Psi u written out directly.
OperatorBlock xi_operator(const BaseFlowProfile& flow, double r);
OperatorBlock psi_operator(const BaseFlowProfile& flow, int m, double omega, double r);

/// Values and radial slopes of (F, G, H, P) at one radius.
struct NodalState {
  std::array<cplx, 4> value{};
  std::array<cplx, 4> slope{};
};

/// Residuals of the linearized equations from their primitive form:
///   continuity            G + r G' + k r F + m H
///   radial momentum       (kU - omega + mW/r) G + 2 W H / r - P'
///   tangential (times r)  (kUr - omega r + mW) H + (W + r W') G + m P
///   axial momentum        (kU - omega + mW/r) F + U' G + k P
/// Requires 0 < r < r_wall; throws DomainError otherwise.
std::array<cplx, 4> lambda_residual(const NodalState& u, cplx k, const StabilityProblem& problem,
                                    double r);

/// (k W + omega F + R) u for pencil blocks W, F, R.
std::array<cplx, 4> apply_blocks(const PencilBlocks& blocks, cplx k, double omega,
                                 const NodalState& u);

/// k Xi u - Psi u.
std::array<cplx, 4> apply_matrix_form(const OperatorBlock& xi, const OperatorBlock& psi, cplx k,
                                      const NodalState& u);

/// Spectral coefficients s = (f, g, h, p), blockwise, 4N entries.
class PerturbationField {
 public:
  explicit PerturbationField(Eigen::VectorXcd coefficients);

  int size() const noexcept { return static_cast<int>(s_.size() / 4); }
  const Eigen::VectorXcd& stacked() const noexcept { return s_; }

  auto f() const { return s_.segment(0, size()); }
  auto g() const { return s_.segment(size(), size()); }
  auto h() const { return s_.segment(2 * size(), size()); }
  auto p() const { return s_.segment(3 * size(), size()); }

  /// Nodal values and slopes at r by direct polynomial evaluation.
  NodalState at(double r, double r_wall) const;

 private:
  Eigen::VectorXcd s_;
};

/// Operator rows at the radii `points`, as matrices acting on s.
/// Row (e * points.size() + i) is equation e at points[i].
/// `eval` and `deriv` are the basis tables at the same points.
struct OperatorRows {
  Eigen::MatrixXd wavenumber;
  Eigen::MatrixXd rest;  // includes the omega terms
};

OperatorRows operator_rows(const StabilityProblem& problem, std::span<const double> points,
                           const Eigen::MatrixXd& eval, const Eigen::MatrixXd& deriv);

/// Differential residual of a candidate eigenpair, sampled at the basis'
/// residual points (midpoints between grid nodes, never on the axis).
class ResidualOperator {
 public:
  explicit ResidualOperator(const StabilityProblem& problem);

  /// Pointwise magnitudes sqrt(sum over equations |res|^2) / ||s||.
  /// All zero when s = 0.
  std::vector<double> profile(const Eigen::VectorXcd& s, cplx k) const;
  /// Root mean square of the pointwise profile.
  double norm(const Eigen::VectorXcd& s, cplx k) const;
  /// Largest pointwise magnitude.
  double max(const Eigen::VectorXcd& s, cplx k) const;

 private:
  int points_;
  OperatorRows rows_;
};

/// Normalized residual used by the spurious-mode filter. Independent of the
/// scale of s.
double residual_norm(const PerturbationField& s, cplx k, const StabilityProblem& problem);

}  // namespace swirlstab
