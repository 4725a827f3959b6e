#include "swirlstab/projection_assembly.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "swirlstab/errors.hpp"

namespace swirlstab {

namespace {

constexpr double kAxisSwirlTolerance = 1e-10;

void check_size(const StabilityProblem& problem) {
  problem.validate();
  if (problem.size() < 5) {
    throw ParameterError("N", "assembly needs N >= 5, got " + std::to_string(problem.size()));
  }
}

void check_axis_swirl(const BaseFlowProfile& flow) {
  const double w0 = flow.swirl(0.0);
  const double scale = std::max(1.0, std::abs(flow.swirl_wall()));
  if (std::abs(w0) > kAxisSwirlTolerance * scale) {
    throw SingularTensorError("W(0) = " + std::to_string(w0) +
                              " makes the W/r inner products singular");
  }
}

double weight_value(const BaseFlowProfile& flow, TensorKey key, double r) {
  if (key.power == -1) return flow.swirl_over_r(r);
  double v = 1.0;
  switch (key.field) {
    case TensorField::one:
      v = key.derivative == 0 ? 1.0 : 0.0;
      break;
    case TensorField::axial:
      v = key.derivative == 0 ? flow.axial(r) : flow.axial_slope(r);
      break;
    case TensorField::swirl:
      v = key.derivative == 0 ? flow.swirl(r) : flow.swirl_slope(r);
      break;
  }
  return key.power == 1 ? r * v : v;
}

// Test functions T*_1..T*_{N-1} (columns) at the quadrature nodes.
struct QuadTables {
  QuadratureRule rule;
  Eigen::MatrixXd eval;
  Eigen::MatrixXd deriv;
};

QuadTables quad_tables(const BasisContext& ctx, int order) {
  QuadTables q{gauss_chebyshev_rule(order, ctx.r_wall()), {}, {}};
  q.eval = eval_table(q.rule.nodes, ctx.size(), ctx.r_wall());
  q.deriv = q.eval * derivative_matrix(ctx.size(), ctx.r_wall());
  return q;
}

const std::vector<TensorKey>& required_keys() {
  static const std::vector<TensorKey> keys = {
      {TensorField::one, 1, 0},   {TensorField::axial, 0, 0}, {TensorField::axial, 1, 0},
      {TensorField::axial, 0, 1}, {TensorField::swirl, -1, 0}, {TensorField::swirl, 0, 0},
      {TensorField::swirl, 1, 1},
  };
  return keys;
}

Pencil pencil_from_projection(const StabilityProblem& problem, const ProjectedOperator& op) {
  const int n = problem.size();
  const int tests = n - 1;
  const int interior = n - 2;
  Pencil pencil{Eigen::MatrixXcd::Zero(4 * n, 4 * n), Eigen::MatrixXcd::Zero(4 * n, 4 * n), {}};
  pencil.tags.reserve(4 * n);
  int next = 0;

  const Eigen::MatrixXd rest = problem.omega * op.frequency + op.rest;
  for (int eq = 0; eq < 4; ++eq) {
    std::vector<RowTag> tags;
    for (int i = 1; i <= interior; ++i) {
      tags.push_back({RowKind::interior, std::string(kEquationNames[eq]) + "@T" + std::to_string(i)});
    }
    append_operator_rows(pencil, next, op.wavenumber.middleRows(eq * tests, interior),
                         rest.middleRows(eq * tests, interior), tags);
  }
  append_boundary_rows(pencil, next, boundary_rows(problem));
  const int closure = 1 * tests + (n - 2);
  append_operator_rows(pencil, next, op.wavenumber.middleRows(closure, 1),
                       rest.middleRows(closure, 1),
                       {{RowKind::closure, "closure-radial-momentum@T" + std::to_string(n - 1)}});
  pencil.check();
  return pencil;
}

}  // namespace

int projection_quad_order(const BasisContext& ctx) {
  return std::max(ctx.quad_order(), 2 * ctx.size() + 8);
}

Eigen::MatrixXd tensor_table(const BaseFlowProfile& flow, const BasisContext& ctx, TensorKey key,
                             int quad_order) {
  if (key.power < -1 || key.power > 1 || key.derivative < 0 || key.derivative > 1) {
    throw ParameterError("key", "power must lie in {-1, 0, 1} and derivative in {0, 1}");
  }
  if (key.power == -1) {
    if (key.field != TensorField::swirl || key.derivative != 0) {
      throw ParameterError("power", "r^-1 tables exist only for W itself");
    }
    check_axis_swirl(flow);
  }
  const QuadTables q = quad_tables(ctx, quad_order);
  Eigen::VectorXd v(q.rule.nodes.size());
  for (std::size_t i = 0; i < q.rule.nodes.size(); ++i) v[i] = weight_value(flow, key, q.rule.nodes[i]);
  const int n = ctx.size();
  return q.rule.weight * q.eval.leftCols(n - 1).transpose() * v.asDiagonal() * q.eval;
}

const Eigen::MatrixXd& TensorSet::at(TensorKey key) const {
  const auto it = tables.find(key);
  if (it == tables.end()) throw ParameterError("key", "inner-product table not built");
  return it->second;
}

TensorSet build_tensors(const StabilityProblem& problem) {
  problem.validate();
  check_axis_swirl(*problem.flow);
  TensorSet set;
  set.quad_order = projection_quad_order(*problem.basis);
  for (const auto& key : required_keys()) {
    set.tables.emplace(key, tensor_table(*problem.flow, *problem.basis, key, set.quad_order));
  }
  return set;
}

ProjectedOperator galerkin_rows(const StabilityProblem& problem) {
  problem.validate();
  check_axis_swirl(*problem.flow);
  const int n = problem.size();
  const int tests = n - 1;
  const QuadTables q = quad_tables(*problem.basis, projection_quad_order(*problem.basis));
  const int count = static_cast<int>(q.rule.nodes.size());

  std::vector<PencilBlocks> blocks;
  blocks.reserve(count);
  for (double r : q.rule.nodes) blocks.push_back(pencil_blocks(problem, r));

  const Eigen::MatrixXd test = q.rule.weight * q.eval.leftCols(tests).transpose();
  ProjectedOperator op{Eigen::MatrixXd::Zero(4 * tests, 4 * n), Eigen::MatrixXd::Zero(4 * tests, 4 * n),
                       Eigen::MatrixXd::Zero(4 * tests, 4 * n)};
  Eigen::VectorXd value(count);
  Eigen::VectorXd slope(count);
  auto project = [&](Eigen::MatrixXd& out, OperatorBlock PencilBlocks::*part, int eq, int field) {
    for (int i = 0; i < count; ++i) {
      value[i] = (blocks[i].*part)[eq][field].value;
      slope[i] = (blocks[i].*part)[eq][field].slope;
    }
    if (value.isZero(0.0) && slope.isZero(0.0)) return;
    out.block(eq * tests, field * n, tests, n) =
        test * (value.asDiagonal() * q.eval + slope.asDiagonal() * q.deriv);
  };
  for (int eq = 0; eq < 4; ++eq) {
    for (int field = 0; field < 4; ++field) {
      project(op.wavenumber, &PencilBlocks::wavenumber, eq, field);
      project(op.frequency, &PencilBlocks::frequency, eq, field);
      project(op.rest, &PencilBlocks::rest, eq, field);
    }
  }
  return op;
}

ProjectedOperator tensor_rows(const StabilityProblem& problem, const TensorSet& tensors) {
  problem.validate();
  const int n = problem.size();
  const int tests = n - 1;
  const double m = problem.m;
  const double r_wall = problem.r_wall();

  // (T*_j, T*_i)_w is diagonal, and derivatives enter through the
  // coefficient-space expansion of dT*_j/dr.
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(tests, n);
  for (int i = 1; i <= tests; ++i) gram(i - 1, i - 1) = basis_norm_squared(i, r_wall);
  const Eigen::MatrixXd c = derivative_matrix(n, r_wall);

  const auto& r_one = tensors.at({TensorField::one, 1, 0});
  const auto& u = tensors.at({TensorField::axial, 0, 0});
  const auto& r_u = tensors.at({TensorField::axial, 1, 0});
  const auto& du = tensors.at({TensorField::axial, 0, 1});
  const auto& w_over_r = tensors.at({TensorField::swirl, -1, 0});
  const auto& w = tensors.at({TensorField::swirl, 0, 0});
  const auto& r_dw = tensors.at({TensorField::swirl, 1, 1});

  ProjectedOperator op{Eigen::MatrixXd::Zero(4 * tests, 4 * n), Eigen::MatrixXd::Zero(4 * tests, 4 * n),
                       Eigen::MatrixXd::Zero(4 * tests, 4 * n)};
  auto at = [&](Eigen::MatrixXd& out, int eq, int field) {
    return out.block(eq * tests, field * n, tests, n);
  };

  at(op.wavenumber, 0, 0) = r_one;
  at(op.rest, 0, 1) = gram + r_one * c;
  at(op.rest, 0, 2) = m * gram;

  at(op.wavenumber, 1, 1) = u;
  at(op.frequency, 1, 1) = -gram;
  at(op.rest, 1, 1) = m * w_over_r;
  at(op.rest, 1, 2) = 2.0 * w_over_r;
  at(op.rest, 1, 3) = -gram * c;

  at(op.wavenumber, 2, 2) = r_u;
  at(op.frequency, 2, 2) = -r_one;
  at(op.rest, 2, 1) = w + r_dw;
  at(op.rest, 2, 2) = m * w;
  at(op.rest, 2, 3) = m * gram;

  at(op.wavenumber, 3, 0) = u;
  at(op.wavenumber, 3, 3) = gram;
  at(op.frequency, 3, 0) = -gram;
  at(op.rest, 3, 0) = m * w_over_r;
  at(op.rest, 3, 1) = du;
  return op;
}

Pencil assemble_projection(const StabilityProblem& problem) {
  check_size(problem);
  if (problem.method != Method::projection) {
    throw ParameterError("method", "projection assembly called for a collocation problem");
  }
  return pencil_from_projection(problem, *TensorCache::shared().projected(problem));
}

Pencil assemble_projection_from_tensors(const StabilityProblem& problem) {
  check_size(problem);
  return pencil_from_projection(problem,
                                tensor_rows(problem, *TensorCache::shared().tensors(problem)));
}

TensorCache& TensorCache::shared() {
  static TensorCache cache;
  return cache;
}

std::shared_ptr<const TensorSet> TensorCache::tensors(const StabilityProblem& problem) {
  problem.validate();
  const Key key{problem.flow.get(), problem.size(), problem.r_wall(),
                projection_quad_order(*problem.basis), 0};
  {
    std::shared_lock lock(mutex_);
    if (auto it = tensor_entries_.find(key); it != tensor_entries_.end()) return it->second.tensors;
  }
  auto built = std::make_shared<const TensorSet>(build_tensors(problem));
  std::unique_lock lock(mutex_);
  auto [it, inserted] = tensor_entries_.try_emplace(key, Entry{problem.flow, built, nullptr});
  return it->second.tensors;
}

std::shared_ptr<const ProjectedOperator> TensorCache::projected(const StabilityProblem& problem) {
  problem.validate();
  const Key key{problem.flow.get(), problem.size(), problem.r_wall(),
                projection_quad_order(*problem.basis), problem.m};
  {
    std::shared_lock lock(mutex_);
    if (auto it = projected_entries_.find(key); it != projected_entries_.end()) {
      return it->second.projected;
    }
  }
  auto built = std::make_shared<const ProjectedOperator>(galerkin_rows(problem));
  std::unique_lock lock(mutex_);
  auto [it, inserted] = projected_entries_.try_emplace(key, Entry{problem.flow, nullptr, built});
  return it->second.projected;
}

std::size_t TensorCache::size() const {
  std::shared_lock lock(mutex_);
  return tensor_entries_.size() + projected_entries_.size();
}

void TensorCache::clear() {
  std::unique_lock lock(mutex_);
  tensor_entries_.clear();
  projected_entries_.clear();
}

}  // namespace swirlstab
