#include "swirlstab/collocation_assembly.hpp"

#include "swirlstab/errors.hpp"

namespace swirlstab {

namespace {

void check_size(const StabilityProblem& problem) {
  problem.validate();
  if (problem.size() < 5) {
    throw ParameterError("N", "assembly needs N >= 5, got " + std::to_string(problem.size()));
  }
}

}  // namespace

BoundaryRow collocation_closure_row(const StabilityProblem& problem) {
  check_size(problem);
  const int n = problem.size();
  const auto& ctx = *problem.basis;
  if (problem.closure == Closure::axis_parity) {
    BoundaryRow row{"closure-axis-parity", Eigen::RowVectorXd::Zero(4 * n),
                    Eigen::RowVectorXd::Zero(4 * n)};
    row.m.segment(n, n) = ctx.deriv().row(0);
    return row;
  }
  const double wall[] = {ctx.r_wall()};
  const OperatorRows rows =
      operator_rows(problem, wall, ctx.eval().bottomRows(1), ctx.deriv().bottomRows(1));
  return {"closure-wall-continuity", rows.wavenumber.row(0), -rows.rest.row(0)};
}

Pencil assemble_collocation(const StabilityProblem& problem) {
  check_size(problem);
  if (problem.method != Method::collocation) {
    throw ParameterError("method", "collocation assembly called for a projection problem");
  }
  const int n = problem.size();
  const auto& ctx = *problem.basis;
  const int interior = n - 2;

  Pencil pencil{Eigen::MatrixXcd::Zero(4 * n, 4 * n), Eigen::MatrixXcd::Zero(4 * n, 4 * n), {}};
  pencil.tags.reserve(4 * n);
  int next = 0;

  const OperatorRows rows = operator_rows(problem, ctx.nodes().subspan(1, interior),
                                          ctx.eval().middleRows(1, interior),
                                          ctx.deriv().middleRows(1, interior));
  std::vector<RowTag> tags;
  tags.reserve(4 * interior);
  for (int eq = 0; eq < 4; ++eq) {
    for (int i = 2; i <= n - 1; ++i) {
      tags.push_back({RowKind::interior, std::string(kEquationNames[eq]) + "@node" + std::to_string(i)});
    }
  }
  append_operator_rows(pencil, next, rows.wavenumber, rows.rest, tags);
  append_boundary_rows(pencil, next, boundary_rows(problem));

  const BoundaryRow closure = collocation_closure_row(problem);
  pencil.mk.row(next) = closure.mk.cast<cplx>();
  pencil.m.row(next) = closure.m.cast<cplx>();
  pencil.tags.push_back({RowKind::closure, closure.label});
  ++next;

  pencil.check();
  return pencil;
}

}  // namespace swirlstab
