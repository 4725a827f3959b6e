#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "swirlstab/pencil.hpp"

namespace swirlstab {

enum class ModeStatus { physical, spurious, infinite };

std::string to_string(ModeStatus status);
ModeStatus parse_status(const std::string& name);

/// One generalized eigenpair of a pencil. Infinite modes carry NaN for k and
/// the residuals, and an empty field.
struct EigenMode {
  cplx k;
  /// Unit 2-norm; the first component with magnitude >= 1e-6 of the largest is real and positive.
  Eigen::VectorXcd field;
  /// Root-mean-square differential residual (the classification residual).
  double residual = 0.0;
  /// Largest pointwise differential residual.
  double residual_max = 0.0;
  ModeStatus status = ModeStatus::spurious;
};

/// Problem description stored with every result.
struct ProblemEcho {
  int m = 0;
  double omega = 0.0;
  int n = 0;
  double r_wall = 0.0;
  Method method = Method::collocation;
  Closure closure = Closure::wall_continuity;
  std::string profile;
  int quad_order = 0;
};

ProblemEcho echo(const StabilityProblem& problem);

struct SolveOptions {
  double epsilon = 1e-6;
  double beta_min = 1e-10;
};

/// Modes sorted by Im(k), then Re(k); infinite modes last in solver order.
struct Spectrum {
  std::vector<EigenMode> modes;
  ProblemEcho problem;
  double epsilon = 0.0;
  double beta_min = 0.0;
  int physical = 0;
  int spurious = 0;
  int infinite = 0;
};

/// Raw output of the QZ reduction of (a, b): eigenvalues alpha / beta and
/// right eigenvectors (columns).
struct GeneralizedEigen {
  Eigen::VectorXcd alpha;
  Eigen::VectorXcd beta;
  Eigen::MatrixXcd vectors;
};

/// Solves a x = lambda b x. Throws StructuralError for mismatched shapes and
/// NumericalError when the QZ iteration fails.
GeneralizedEigen generalized_eigen(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// Eigenpairs k mk s = m s with |beta| < beta_min * ||mk||_F flagged infinite.
/// Scores nothing; every finite pair is reported spurious with zero residual.
Spectrum eigenpairs(const Pencil& pencil, double beta_min);

/// Full solve: eigenpairs, normalization, differential residual scoring and
/// classification against epsilon.
Spectrum solve(const Pencil& pencil, const StabilityProblem& problem, const SolveOptions& options = {});

/// Re-applies the residual threshold to the finite modes and refreshes counts.
void classify(Spectrum& spectrum, double epsilon);

/// Rectangle in the complex k plane; unbounded by default.
struct KWindow {
  double re_min = -std::numeric_limits<double>::infinity();
  double re_max = std::numeric_limits<double>::infinity();
  double im_min = -std::numeric_limits<double>::infinity();
  double im_max = std::numeric_limits<double>::infinity();

  bool contains(cplx k) const;
  bool bounded() const;
};

/// Physical mode with the smallest Im(k) inside `window`, if any.
std::optional<EigenMode> leading_mode(const Spectrum& spectrum, const KWindow& window = {});

/// ||m s - k mk s|| / (||m||_F ||s||).
double pencil_residual(const Pencil& pencil, const EigenMode& mode);

}  // namespace swirlstab
