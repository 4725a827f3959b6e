#pragma once

#include <compare>
#include <map>
#include <memory>
#include <shared_mutex>
#include <tuple>

#include "swirlstab/pencil.hpp"

namespace swirlstab {

enum class TensorField { one, axial, swirl };

/// Selects the weight r^power * V^(derivative) of an inner-product table.
struct TensorKey {
  TensorField field;
  int power;       // -1, 0 or 1
  int derivative;  // 0 or 1
  auto operator<=>(const TensorKey&) const = default;
};

/// Quadrature size for projected rows: max(ctx quad_order, 2N + 8).
int projection_quad_order(const BasisContext& ctx);

/// table(i - 1, j - 1) = (r^power V^(derivative) T*_j, T*_i)_w for
/// i = 1..N-1 and j = 1..N. Throws SingularTensorError for power -1 when
/// W(0) != 0, and ParameterError for power -1 on any field but swirl.
Eigen::MatrixXd tensor_table(const BaseFlowProfile& flow, const BasisContext& ctx, TensorKey key,
                             int quad_order);

/// All tables the projected equations need.
struct TensorSet {
  int quad_order = 0;
  std::map<TensorKey, Eigen::MatrixXd> tables;

  const Eigen::MatrixXd& at(TensorKey key) const;
};

TensorSet build_tensors(const StabilityProblem& problem);

/// Projections of the operator onto T*_1..T*_{N-1}; row
/// eq * (N - 1) + (i - 1) holds (equation eq, T*_i)_w. The full operator is
/// k * wavenumber + omega * frequency + rest.
struct ProjectedOperator {
  Eigen::MatrixXd wavenumber;
  Eigen::MatrixXd frequency;
  Eigen::MatrixXd rest;
};

/// Direct numerical projection of the operator, one quadrature per row.
ProjectedOperator galerkin_rows(const StabilityProblem& problem);

/// The same projections rebuilt from inner-product tables and the
/// Chebyshev derivative expansion.
ProjectedOperator tensor_rows(const StabilityProblem& problem, const TensorSet& tensors);

/// Projection pencil: equations tested against T*_1..T*_{N-2}, the seven
/// boundary rows, and radial momentum tested against T*_{N-1}.
/// Requires N >= 5.
Pencil assemble_projection(const StabilityProblem& problem);

/// Same layout as assemble_projection, built from tensor_rows.
Pencil assemble_projection_from_tensors(const StabilityProblem& problem);

/// Process-wide cache of tables and projected operators keyed by
/// (profile, N, r_wall, quadrature size, m). Sweeps over omega reuse entries.
/// Lookups take a shared lock; insertion takes an exclusive one.
class TensorCache {
 public:
  static TensorCache& shared();

  std::shared_ptr<const TensorSet> tensors(const StabilityProblem& problem);
  std::shared_ptr<const ProjectedOperator> projected(const StabilityProblem& problem);

  std::size_t size() const;
  void clear();

 private:
  using Key = std::tuple<const BaseFlowProfile*, int, double, int, int>;
  struct Entry {
    std::shared_ptr<const BaseFlowProfile> flow;
    std::shared_ptr<const TensorSet> tensors;
    std::shared_ptr<const ProjectedOperator> projected;
  };

  mutable std::shared_mutex mutex_;
  std::map<Key, Entry> tensor_entries_;
  std::map<Key, Entry> projected_entries_;
};

}  // namespace swirlstab
