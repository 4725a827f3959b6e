#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace swirlstab {

// Shifted Chebyshev polynomials on [0, r_wall].
//
// Polynomials are indexed from 1: T*_n has degree n - 1, so T*_1 = 1 and
// T*_2(r) = 2r/r_wall - 1. Table columns are 0-based, column j holds T*_{j+1}.
//
// The inner product is (u, v)_w = int_0^r_wall u v w dr with the Chebyshev
// weight w(r) = (1 - (2r/r_wall - 1)^2)^(-1/2). The squared argument is
// required for (T*_n, T*_n)_w = r_wall pi/2 (n = 1) or r_wall pi/4 (n > 1).

/// Chebyshev weight on [0, r_wall]; +inf at the endpoints.
double chebyshev_weight(double r, double r_wall);

/// T*_n(r) through cos((n-1) arccos(2r/r_wall - 1)).
/// Throws DomainError when r lies outside [0, r_wall].
double cheb_shifted_eval(int n, double r, double r_wall);

/// T*_n(r) through the three-term recurrence.
double cheb_shifted_eval_recurrence(int n, double r, double r_wall);

/// T*_n(r) through the power form
///   ((x + sqrt(x^2 - 1))^(n-1) + (x - sqrt(x^2 - 1))^(n-1)) / 2,  x = 2r/r_wall - 1,
/// evaluated in complex arithmetic. Kept for cross-checking; the imaginary
/// part is rounding noise.
std::complex<double> cheb_shifted_eval_closed_form(int n, double r, double r_wall);

/// Coefficients c with dT*_n/dr = sum_l c[l-1] T*_l (length n; c[n-1] = 0).
///   dT*_n/dr = 2(n-1)/r_wall [2 T*_{n-1} + 2 T*_{n-3} + ...]
/// where the trailing T*_1 term carries coefficient 1 instead of 2.
std::vector<double> derivative_expansion(int n, double r_wall);

/// N x N coefficient-space differentiation: column j holds the expansion of
/// dT*_{j+1}/dr, so (C * a) are the coefficients of the derivative of sum a_j T*_{j+1}.
Eigen::MatrixXd derivative_matrix(int n, double r_wall);

/// dT*_n/dr at r.
double cheb_shifted_deriv(int n, double r, double r_wall);

/// Chebyshev points r_1 = 0 < ... < r_N = r_wall (symmetric about r_wall / 2).
std::vector<double> chebyshev_grid(int n, double r_wall);

/// max(2N, 64).
int default_quad_order(int n);

/// Gauss-Chebyshev rule on [0, r_wall]: int f w dr ~= weight * sum f(nodes[q]).
/// Nodes are interior, so the weight singularity is never sampled.
struct QuadratureRule {
  std::vector<double> nodes;
  double weight = 0.0;
};

QuadratureRule gauss_chebyshev_rule(int order, double r_wall);

/// (T*_n, T*_n)_w.
double basis_norm_squared(int n, double r_wall);

/// Evaluation tables: out(i, j) = T*_{j+1}(points[i]) and its radial derivative.
Eigen::MatrixXd eval_table(std::span<const double> points, int n, double r_wall);
Eigen::MatrixXd deriv_table(std::span<const double> points, int n, double r_wall);

/// Immutable basis of N shifted Chebyshev polynomials on [0, r_wall] with its
/// grid, quadrature, and the tables the assemblers read.
class BasisContext {
 public:
  BasisContext(int n, double r_wall, int quad_order);

  int size() const noexcept { return n_; }
  double r_wall() const noexcept { return r_wall_; }
  int quad_order() const noexcept { return static_cast<int>(quadrature_.nodes.size()); }

  /// Grid nodes, ascending, axis first.
  std::span<const double> nodes() const noexcept { return nodes_; }
  /// eta(i, j) = T*_{j+1}(nodes[i]).
  const Eigen::MatrixXd& eval() const noexcept { return eval_; }
  /// D(i, j) = dT*_{j+1}/dr(nodes[i]).
  const Eigen::MatrixXd& deriv() const noexcept { return deriv_; }

  const QuadratureRule& quadrature() const noexcept { return quadrature_; }
  const Eigen::MatrixXd& quad_eval() const noexcept { return quad_eval_; }

  /// Off-grid sample points used to score eigenmodes: the N - 1 midpoints
  /// between consecutive grid nodes.
  std::span<const double> residual_points() const noexcept { return residual_points_; }
  const Eigen::MatrixXd& residual_eval() const noexcept { return residual_eval_; }
  const Eigen::MatrixXd& residual_deriv() const noexcept { return residual_deriv_; }

 private:
  int n_;
  double r_wall_;
  std::vector<double> nodes_;
  Eigen::MatrixXd eval_;
  Eigen::MatrixXd deriv_;
  QuadratureRule quadrature_;
  Eigen::MatrixXd quad_eval_;
  std::vector<double> residual_points_;
  Eigen::MatrixXd residual_eval_;
  Eigen::MatrixXd residual_deriv_;
};

/// Validates (N >= 2, r_wall > 0, quad_order >= 2N) and builds the context.
/// quad_order <= 0 selects default_quad_order(N).
std::shared_ptr<const BasisContext> make_context(int n, double r_wall, int quad_order = 0);

/// Gauss-Chebyshev approximation of (f, g)_w using ctx's quadrature.
template <class F, class G>
double inner_product(F&& f, G&& g, const BasisContext& ctx) {
  const auto& rule = ctx.quadrature();
  double sum = 0.0;
  for (double r : rule.nodes) sum += f(r) * g(r);
  return rule.weight * sum;
}

// Auxiliary bases on [-1, 1], used for diagnostics.
enum class ModalKind {
  phi,    // T_l - T_{l+2}
  psi,    // T_l - 2(l+2)/(l+3) T_{l+2} + (l+1)/(l+3) T_{l+4}
  theta,  // Legendre-Galerkin combination of L_{l-1}, L_{l+1}, L_{l+3}
  gamma,  // boundary-adapted: two vertex functions, then bubbles
};

double modal_basis_eval(ModalKind kind, int l, double x);

/// Lagrange interpolant through (nodes, values) in barycentric form.
class BarycentricInterpolant {
 public:
  BarycentricInterpolant(std::vector<double> nodes, std::vector<double> values);

  double operator()(double x) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> weights_;
};

double barycentric_eval(std::span<const double> nodes, std::span<const double> values, double x);

}  // namespace swirlstab
