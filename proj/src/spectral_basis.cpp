#include "swirlstab/spectral_basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "swirlstab/errors.hpp"

namespace swirlstab {

namespace {

constexpr double kPi = std::numbers::pi;

// Grid nodes are produced in floating point, so allow a few ulps of slack at
// the interval ends before reporting a domain error.
double checked_argument(double r, double r_wall) {
  const double slack = 8.0 * std::numeric_limits<double>::epsilon() * r_wall;
  if (!(r >= -slack && r <= r_wall + slack)) {
    throw DomainError("radius " + std::to_string(r) + " outside [0, " + std::to_string(r_wall) +
                      "]");
  }
  return std::clamp(2.0 * r / r_wall - 1.0, -1.0, 1.0);
}

void check_index(int n) {
  if (n < 1) throw ParameterError("n", "shifted Chebyshev index starts at 1");
}

double chebyshev_t(int degree, double x) {
  return std::cos(degree * std::acos(std::clamp(x, -1.0, 1.0)));
}

}  // namespace

double chebyshev_weight(double r, double r_wall) {
  const double x = 2.0 * r / r_wall - 1.0;
  const double s = 1.0 - x * x;
  if (s <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / std::sqrt(s);
}

double cheb_shifted_eval(int n, double r, double r_wall) {
  check_index(n);
  const double x = checked_argument(r, r_wall);
  if (n == 1) return 1.0;
  return chebyshev_t(n - 1, x);
}

double cheb_shifted_eval_recurrence(int n, double r, double r_wall) {
  check_index(n);
  const double x = checked_argument(r, r_wall);
  double prev = 1.0;
  if (n == 1) return prev;
  double cur = x;
  for (int k = 3; k <= n; ++k) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::complex<double> cheb_shifted_eval_closed_form(int n, double r, double r_wall) {
  check_index(n);
  const std::complex<double> x(checked_argument(r, r_wall), 0.0);
  const std::complex<double> root = std::sqrt(x * x - 1.0);
  return 0.5 * (std::pow(x + root, n - 1) + std::pow(x - root, n - 1));
}

std::vector<double> derivative_expansion(int n, double r_wall) {
  check_index(n);
  std::vector<double> c(n, 0.0);
  const double scale = 2.0 * (n - 1) / r_wall;
  for (int l = n - 1; l >= 1; l -= 2) c[l - 1] = (l == 1 ? 1.0 : 2.0) * scale;
  return c;
}

Eigen::MatrixXd derivative_matrix(int n, double r_wall) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int j = 1; j <= n; ++j) {
    const auto col = derivative_expansion(j, r_wall);
    for (int l = 1; l <= j; ++l) c(l - 1, j - 1) = col[l - 1];
  }
  return c;
}

double cheb_shifted_deriv(int n, double r, double r_wall) {
  check_index(n);
  checked_argument(r, r_wall);
  const auto c = derivative_expansion(n, r_wall);
  double sum = 0.0;
  for (int l = n - 1; l >= 1; l -= 2) sum += c[l - 1] * cheb_shifted_eval(l, r, r_wall);
  return sum;
}

std::vector<double> chebyshev_grid(int n, double r_wall) {
  if (n < 2) throw ParameterError("N", "grid needs at least two nodes");
  std::vector<double> r(n);
  // x_i = -cos(pi i / (N-1)) written as a sine so the grid is exactly
  // antisymmetric about the midpoint and hits the endpoints exactly.
  for (int i = 0; i < n; ++i) {
    const double x = -std::sin(kPi * (n - 1 - 2 * i) / (2.0 * (n - 1)));
    r[i] = 0.5 * r_wall * (1.0 + x);
  }
  r.front() = 0.0;
  r.back() = r_wall;
  return r;
}

int default_quad_order(int n) { return std::max(2 * n, 64); }

QuadratureRule gauss_chebyshev_rule(int order, double r_wall) {
  QuadratureRule rule;
  rule.nodes.resize(order);
  for (int q = 0; q < order; ++q) {
    // ascending interior nodes
    const double x = -std::cos((2.0 * q + 1.0) * kPi / (2.0 * order));
    rule.nodes[q] = 0.5 * r_wall * (1.0 + x);
  }
  rule.weight = 0.5 * r_wall * kPi / order;
  return rule;
}

double basis_norm_squared(int n, double r_wall) {
  check_index(n);
  return n == 1 ? r_wall * kPi / 2.0 : r_wall * kPi / 4.0;
}

Eigen::MatrixXd eval_table(std::span<const double> points, int n, double r_wall) {
  Eigen::MatrixXd out(points.size(), n);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = cheb_shifted_eval(j + 1, points[i], r_wall);
  }
  return out;
}

Eigen::MatrixXd deriv_table(std::span<const double> points, int n, double r_wall) {
  return eval_table(points, n, r_wall) * derivative_matrix(n, r_wall);
}

BasisContext::BasisContext(int n, double r_wall, int quad_order)
    : n_(n),
      r_wall_(r_wall),
      nodes_(chebyshev_grid(n, r_wall)),
      quadrature_(gauss_chebyshev_rule(quad_order, r_wall)) {
  const Eigen::MatrixXd c = derivative_matrix(n, r_wall);
  eval_ = eval_table(nodes_, n, r_wall);
  deriv_ = eval_ * c;
  quad_eval_ = eval_table(quadrature_.nodes, n, r_wall);
  residual_points_.reserve(n - 1);
  for (int i = 0; i + 1 < n; ++i) residual_points_.push_back(0.5 * (nodes_[i] + nodes_[i + 1]));
  residual_eval_ = eval_table(residual_points_, n, r_wall);
  residual_deriv_ = residual_eval_ * c;
}

std::shared_ptr<const BasisContext> make_context(int n, double r_wall, int quad_order) {
  if (n < 2) throw ParameterError("N", "need at least 2 expansion terms, got " + std::to_string(n));
  if (!(r_wall > 0.0) || !std::isfinite(r_wall)) {
    throw ParameterError("r_wall", "must be positive and finite");
  }
  if (quad_order <= 0) quad_order = default_quad_order(n);
  if (quad_order < 2 * n) {
    throw ParameterError("quad_order", "must be at least 2N = " + std::to_string(2 * n) +
                                           ", got " + std::to_string(quad_order));
  }
  return std::make_shared<const BasisContext>(n, r_wall, quad_order);
}

double modal_basis_eval(ModalKind kind, int l, double x) {
  if (l < 0) throw ParameterError("l", "modal index must be non-negative");
  if (!(x >= -1.0 && x <= 1.0)) throw ParameterError("x", "must lie in [-1, 1]");
  switch (kind) {
    case ModalKind::phi:
      return chebyshev_t(l, x) - chebyshev_t(l + 2, x);
    case ModalKind::psi:
      return chebyshev_t(l, x) - 2.0 * (l + 2.0) / (l + 3.0) * chebyshev_t(l + 2, x) +
             (l + 1.0) / (l + 3.0) * chebyshev_t(l + 4, x);
    case ModalKind::theta: {
      if (l < 1) throw ParameterError("l", "theta basis needs l >= 1");
      const unsigned ul = static_cast<unsigned>(l);
      const double upper = (std::legendre(ul + 3, x) - std::legendre(ul + 1, x)) /
                           ((2.0 * l + 3.0) * (2.0 * l + 5.0));
      const double lower = (std::legendre(ul + 1, x) - std::legendre(ul - 1, x)) /
                           ((2.0 * l + 1.0) * (2.0 * l - 1.0));
      return std::sqrt((2.0 * l + 3.0) / 2.0) * (upper - lower);
    }
    case ModalKind::gamma:
      if (l == 0) return 0.5 * (1.0 - x);
      if (l == 1) return 0.5 * (1.0 + x);
      return (l % 2 == 0 ? 1.0 : x) - chebyshev_t(l, x);
  }
  throw ParameterError("kind", "unknown modal basis");
}

BarycentricInterpolant::BarycentricInterpolant(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
  if (nodes_.size() != values_.size()) {
    throw ParameterError("values", "need one value per node");
  }
  if (nodes_.empty()) throw ParameterError("nodes", "empty node set");
  const auto [lo, hi] = std::minmax_element(nodes_.begin(), nodes_.end());
  // capacity scaling keeps the products representable for large node counts
  const double scale = *hi > *lo ? 4.0 / (*hi - *lo) : 1.0;
  weights_.assign(nodes_.size(), 1.0);
  for (std::size_t l = 0; l < nodes_.size(); ++l) {
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      if (k == l) continue;
      const double diff = nodes_[l] - nodes_[k];
      if (diff == 0.0) throw ParameterError("nodes", "duplicate node " + std::to_string(nodes_[l]));
      weights_[l] /= scale * diff;
    }
  }
}

double BarycentricInterpolant::operator()(double x) const {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const double diff = x - nodes_[k];
    if (diff == 0.0) return values_[k];
    const double t = weights_[k] / diff;
    num += t * values_[k];
    den += t;
  }
  return num / den;
}

double barycentric_eval(std::span<const double> nodes, std::span<const double> values, double x) {
  return BarycentricInterpolant({nodes.begin(), nodes.end()}, {values.begin(), values.end()})(x);
}

}  // namespace swirlstab
