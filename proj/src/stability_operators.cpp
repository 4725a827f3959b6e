#include "swirlstab/stability_operators.hpp"

#include <cmath>

#include "swirlstab/errors.hpp"

namespace swirlstab {

namespace {

enum Unknown { F = 0, G = 1, H = 2, P = 3 };

constexpr double kWallMatch = 1e-12;

}  // namespace

std::string to_string(Method method) {
  return method == Method::projection ? "projection" : "collocation";
}

std::string to_string(Closure closure) {
  return closure == Closure::wall_continuity ? "wall_continuity" : "axis_parity";
}

Method parse_method(const std::string& name) {
  if (name == "projection") return Method::projection;
  if (name == "collocation") return Method::collocation;
  throw ParameterError("method", "expected projection or collocation, got \"" + name + "\"");
}

Closure parse_closure(const std::string& name) {
  if (name == "wall_continuity" || name == "wall-continuity") return Closure::wall_continuity;
  if (name == "axis_parity" || name == "axis-parity") return Closure::axis_parity;
  throw ParameterError("closure", "expected wall_continuity or axis_parity, got \"" + name + "\"");
}

void StabilityProblem::validate() const {
  if (m != 1 && m != -1) throw UnsupportedModeError(m);
  if (!flow) throw ParameterError("flow", "no base flow");
  if (!basis) throw ParameterError("N", "no spectral basis");
  if (!std::isfinite(omega)) throw ParameterError("omega", "must be finite");
  if (std::abs(flow->r_wall() - basis->r_wall()) > kWallMatch * basis->r_wall()) {
    throw ParameterError("r_wall", "base flow and basis disagree on the wall radius");
  }
}

PencilBlocks pencil_blocks(const BaseFlowProfile& flow, int m, double r) {
  const double u = flow.axial(r);
  const double du = flow.axial_slope(r);
  const double w = flow.swirl(r);
  const double dw = flow.swirl_slope(r);
  const double w_r = flow.swirl_over_r(r);

  PencilBlocks b;
  b.wavenumber[0][F].value = r;
  b.wavenumber[1][G].value = u;
  b.wavenumber[2][H].value = r * u;
  b.wavenumber[3][F].value = u;
  b.wavenumber[3][P].value = 1.0;

  b.frequency[1][G].value = -1.0;
  b.frequency[2][H].value = -r;
  b.frequency[3][F].value = -1.0;

  b.rest[0][G] = {1.0, r};
  b.rest[0][H].value = m;
  b.rest[1][G].value = m * w_r;
  b.rest[1][H].value = 2.0 * w_r;
  b.rest[1][P].slope = -1.0;
  b.rest[2][G].value = w + r * dw;
  b.rest[2][H].value = m * w;
  b.rest[2][P].value = m;
  b.rest[3][F].value = m * w_r;
  b.rest[3][G].value = du;
  return b;
}

PencilBlocks pencil_blocks(const StabilityProblem& problem, double r) {
  return pencil_blocks(*problem.flow, problem.m, r);
}

OperatorBlock xi_operator(const BaseFlowProfile& flow, double r) {
  const double u = flow.axial(r);
  OperatorBlock xi{};
  xi[0][F].value = r;
  xi[1][G].value = u;
  xi[2][H].value = r * u;
  xi[3][F].value = u;
  xi[3][P].value = 1.0;
  return xi;
}

OperatorBlock psi_operator(const BaseFlowProfile& flow, int m, double omega, double r) {
  const double w = flow.swirl(r);
  const double w_r = flow.swirl_over_r(r);
  OperatorBlock psi{};
  psi[0][G] = {-1.0, -r};
  psi[0][H].value = -m;
  psi[1][G].value = omega - m * w_r;
  psi[1][H].value = -2.0 * w_r;
  psi[1][P].slope = 1.0;
  psi[2][G].value = -(w + r * flow.swirl_slope(r));
  psi[2][H].value = omega * r - m * w;
  psi[2][P].value = -m;
  psi[3][F].value = omega - m * w_r;
  psi[3][G].value = -flow.axial_slope(r);
  return psi;
}

std::array<cplx, 4> lambda_residual(const NodalState& u, cplx k, const StabilityProblem& problem,
                                    double r) {
  const double r_wall = problem.r_wall();
  if (!(r > 0.0 && r < r_wall)) {
    throw DomainError("operator residual needs 0 < r < r_wall, got r = " + std::to_string(r));
  }
  const auto& flow = *problem.flow;
  const double m = problem.m;
  const double omega = problem.omega;
  const double U = flow.axial(r);
  const double W = flow.swirl(r);
  const auto& [f, g, h, p] = u.value;
  const cplx dg = u.slope[G];
  const cplx dp = u.slope[P];
  const cplx doppler = k * U - omega + m * W / r;
  return {
      g + r * dg + k * r * f + m * h,
      doppler * g + 2.0 * W * h / r - dp,
      (k * U * r - omega * r + m * W) * h + (W + r * flow.swirl_slope(r)) * g + m * p,
      doppler * f + flow.axial_slope(r) * g + k * p,
  };
}

std::array<cplx, 4> apply_blocks(const PencilBlocks& blocks, cplx k, double omega,
                                 const NodalState& u) {
  std::array<cplx, 4> out{};
  for (int row = 0; row < 4; ++row) {
    for (int col = 0; col < 4; ++col) {
      const auto& a = blocks.wavenumber[row][col];
      const auto& b = blocks.frequency[row][col];
      const auto& c = blocks.rest[row][col];
      out[row] += (k * a.value + omega * b.value + c.value) * u.value[col] +
                  (k * a.slope + omega * b.slope + c.slope) * u.slope[col];
    }
  }
  return out;
}

std::array<cplx, 4> apply_matrix_form(const OperatorBlock& xi, const OperatorBlock& psi, cplx k,
                                      const NodalState& u) {
  std::array<cplx, 4> out{};
  for (int row = 0; row < 4; ++row) {
    for (int col = 0; col < 4; ++col) {
      out[row] += (k * xi[row][col].value - psi[row][col].value) * u.value[col] +
                  (k * xi[row][col].slope - psi[row][col].slope) * u.slope[col];
    }
  }
  return out;
}

PerturbationField::PerturbationField(Eigen::VectorXcd coefficients) : s_(std::move(coefficients)) {
  if (s_.size() == 0 || s_.size() % 4 != 0) {
    throw ParameterError("s", "coefficient vector length must be a positive multiple of 4");
  }
}

NodalState PerturbationField::at(double r, double r_wall) const {
  NodalState out;
  const int n = size();
  for (int j = 1; j <= n; ++j) {
    const double t = cheb_shifted_eval(j, r, r_wall);
    const double dt = cheb_shifted_deriv(j, r, r_wall);
    for (int field = 0; field < 4; ++field) {
      out.value[field] += t * s_[field * n + j - 1];
      out.slope[field] += dt * s_[field * n + j - 1];
    }
  }
  return out;
}

OperatorRows operator_rows(const StabilityProblem& problem, std::span<const double> points,
                           const Eigen::MatrixXd& eval, const Eigen::MatrixXd& deriv) {
  const int n = problem.size();
  const int count = static_cast<int>(points.size());
  if (eval.rows() != count || deriv.rows() != count || eval.cols() != n || deriv.cols() != n) {
    throw StructuralError("basis tables do not match the point set");
  }
  OperatorRows rows{Eigen::MatrixXd::Zero(4 * count, 4 * n), Eigen::MatrixXd::Zero(4 * count, 4 * n)};
  for (int i = 0; i < count; ++i) {
    const PencilBlocks b = pencil_blocks(problem, points[i]);
    for (int eq = 0; eq < 4; ++eq) {
      const int row = eq * count + i;
      for (int field = 0; field < 4; ++field) {
        const auto& a = b.wavenumber[eq][field];
        const auto& fr = b.frequency[eq][field];
        const auto& c = b.rest[eq][field];
        auto kpart = rows.wavenumber.block(row, field * n, 1, n);
        auto rpart = rows.rest.block(row, field * n, 1, n);
        if (a.value != 0.0) kpart += a.value * eval.row(i);
        if (a.slope != 0.0) kpart += a.slope * deriv.row(i);
        const double value = problem.omega * fr.value + c.value;
        const double slope = problem.omega * fr.slope + c.slope;
        if (value != 0.0) rpart += value * eval.row(i);
        if (slope != 0.0) rpart += slope * deriv.row(i);
      }
    }
  }
  return rows;
}

ResidualOperator::ResidualOperator(const StabilityProblem& problem)
    : points_(static_cast<int>(problem.basis->residual_points().size())),
      rows_(operator_rows(problem, problem.basis->residual_points(), problem.basis->residual_eval(),
                          problem.basis->residual_deriv())) {}

std::vector<double> ResidualOperator::profile(const Eigen::VectorXcd& s, cplx k) const {
  std::vector<double> out(points_, 0.0);
  const double scale = s.norm();
  if (scale == 0.0) return out;
  const Eigen::VectorXcd res = k * (rows_.wavenumber * s) + rows_.rest * s;
  for (int i = 0; i < points_; ++i) {
    double sum = 0.0;
    for (int eq = 0; eq < 4; ++eq) sum += std::norm(res[eq * points_ + i]);
    out[i] = std::sqrt(sum) / scale;
  }
  return out;
}

double ResidualOperator::norm(const Eigen::VectorXcd& s, cplx k) const {
  const auto values = profile(s, k);
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return std::sqrt(sum / points_);
}

double ResidualOperator::max(const Eigen::VectorXcd& s, cplx k) const {
  double out = 0.0;
  for (double v : profile(s, k)) out = std::max(out, v);
  return out;
}

double residual_norm(const PerturbationField& s, cplx k, const StabilityProblem& problem) {
  if (s.size() != problem.size()) throw StructuralError("field size does not match the basis");
  return ResidualOperator(problem).norm(s.stacked(), k);
}

}  // namespace swirlstab
