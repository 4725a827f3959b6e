#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "swirlstab/stability_operators.hpp"

namespace swirlstab {

enum class RowKind { interior, boundary, closure };

/// Where a pencil row comes from, e.g. {interior, "radial-momentum@node3"}.
struct RowTag {
  RowKind kind;
  std::string label;
};

/// Generalized eigenproblem k * mk * s = m * s over blockwise unknowns
/// (f_1..f_N, g_1..g_N, h_1..h_N, p_1..p_N).
struct Pencil {
  Eigen::MatrixXcd mk;
  Eigen::MatrixXcd m;
  std::vector<RowTag> tags;

  int size() const noexcept { return static_cast<int>(m.rows()); }
  /// Throws StructuralError unless both matrices are square, equal-sized and tagged per row.
  void check() const;
};

/// One boundary equation in coefficient space, in the pencil's sign convention.
struct BoundaryRow {
  std::string label;
  Eigen::RowVectorXd mk;
  Eigen::RowVectorXd m;
};

/// Names of the equations, in pencil row order.
extern const std::array<const char*, 4> kEquationNames;

/// The seven boundary equations shared by both discretizations:
///   wall-radial-balance      2 W_w H(r_w) / r_w - P'(r_w) = 0
///   wall-tangential-momentum (k U_w r_w - omega r_w + m W_w) H(r_w) + m P(r_w) = 0
///   wall-axial-momentum      (k U_w - omega + m W_w / r_w) r_w F(r_w) + k r_w P(r_w) = 0
///   axis-regularity          G(0) + m H(0) = 0
///   wall-no-penetration      G(r_w) = 0
///   axis-axial-velocity      F(0) = 0
///   axis-pressure            P(0) = 0
/// Throws UnsupportedModeError for |m| != 1.
std::vector<BoundaryRow> boundary_rows(const StabilityProblem& problem);

/// Stacks rows and tags into a pencil. `wavenumber`/`rest` follow the
/// operator convention k * wavenumber + rest = 0, so m = -rest.
void append_operator_rows(Pencil& pencil, int& next, const Eigen::MatrixXd& wavenumber,
                          const Eigen::MatrixXd& rest, const std::vector<RowTag>& tags);
void append_boundary_rows(Pencil& pencil, int& next, const std::vector<BoundaryRow>& rows);

}  // namespace swirlstab
