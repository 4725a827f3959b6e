#include "swirlstab/pencil.hpp"

#include "swirlstab/errors.hpp"

namespace swirlstab {

const std::array<const char*, 4> kEquationNames = {"continuity", "radial-momentum",
                                                   "tangential-momentum", "axial-momentum"};

void Pencil::check() const {
  if (m.rows() != m.cols() || mk.rows() != mk.cols() || m.rows() != mk.rows()) {
    throw StructuralError("pencil matrices must be square and of equal size");
  }
  if (m.rows() == 0 || m.rows() % 4 != 0) {
    throw StructuralError("pencil size must be a positive multiple of 4");
  }
  if (static_cast<Eigen::Index>(tags.size()) != m.rows()) {
    throw StructuralError("pencil needs one tag per row");
  }
}

std::vector<BoundaryRow> boundary_rows(const StabilityProblem& problem) {
  problem.validate();
  const int n = problem.size();
  const double r_w = problem.r_wall();
  const double m = problem.m;
  const double omega = problem.omega;
  const double u_w = problem.flow->axial_wall();
  const double w_w = problem.flow->swirl_wall();

  auto blank = [n] { return Eigen::RowVectorXd::Zero(4 * n).eval(); };
  auto block = [n](Eigen::RowVectorXd& row, int field) { return row.segment(field * n, n); };

  // T*_j(r_w) = 1 and T*_j(0) = (-1)^(j-1).
  Eigen::RowVectorXd axis(n);
  Eigen::RowVectorXd wall_slope(n);
  for (int j = 1; j <= n; ++j) {
    axis[j - 1] = (j % 2 == 1) ? 1.0 : -1.0;
    wall_slope[j - 1] = cheb_shifted_deriv(j, r_w, r_w);
  }
  const Eigen::RowVectorXd wall = Eigen::RowVectorXd::Ones(n);

  std::vector<BoundaryRow> rows;
  rows.reserve(7);

  {
    BoundaryRow row{"wall-radial-balance", blank(), blank()};
    block(row.m, 2) = 2.0 * w_w / r_w * wall;
    block(row.m, 3) = -wall_slope;
    rows.push_back(std::move(row));
  }
  {
    BoundaryRow row{"wall-tangential-momentum", blank(), blank()};
    block(row.mk, 2) = u_w * r_w * wall;
    block(row.m, 2) = -(m * w_w - omega * r_w) * wall;
    block(row.m, 3) = -m * wall;
    rows.push_back(std::move(row));
  }
  {
    BoundaryRow row{"wall-axial-momentum", blank(), blank()};
    block(row.mk, 0) = u_w * r_w * wall;
    block(row.mk, 3) = r_w * wall;
    block(row.m, 0) = -(m * w_w - omega * r_w) * wall;
    rows.push_back(std::move(row));
  }
  {
    BoundaryRow row{"axis-regularity", blank(), blank()};
    block(row.m, 1) = axis;
    block(row.m, 2) = m * axis;
    rows.push_back(std::move(row));
  }
  {
    BoundaryRow row{"wall-no-penetration", blank(), blank()};
    block(row.m, 1) = wall;
    rows.push_back(std::move(row));
  }
  {
    BoundaryRow row{"axis-axial-velocity", blank(), blank()};
    block(row.m, 0) = axis;
    rows.push_back(std::move(row));
  }
  {
    BoundaryRow row{"axis-pressure", blank(), blank()};
    block(row.m, 3) = axis;
    rows.push_back(std::move(row));
  }
  return rows;
}

void append_operator_rows(Pencil& pencil, int& next, const Eigen::MatrixXd& wavenumber,
                          const Eigen::MatrixXd& rest, const std::vector<RowTag>& tags) {
  const auto count = wavenumber.rows();
  if (rest.rows() != count || static_cast<Eigen::Index>(tags.size()) != count ||
      next + count > pencil.m.rows()) {
    throw StructuralError("operator rows do not fit the pencil");
  }
  pencil.mk.middleRows(next, count) = wavenumber.cast<cplx>();
  pencil.m.middleRows(next, count) = -rest.cast<cplx>();
  for (const auto& tag : tags) pencil.tags.push_back(tag);
  next += static_cast<int>(count);
}

void append_boundary_rows(Pencil& pencil, int& next, const std::vector<BoundaryRow>& rows) {
  for (const auto& row : rows) {
    if (next >= pencil.m.rows()) throw StructuralError("boundary rows do not fit the pencil");
    pencil.mk.row(next) = row.mk.cast<cplx>();
    pencil.m.row(next) = row.m.cast<cplx>();
    pencil.tags.push_back({RowKind::boundary, row.label});
    ++next;
  }
}

}  // namespace swirlstab
