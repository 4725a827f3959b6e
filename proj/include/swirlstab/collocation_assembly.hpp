#pragma once

#include "swirlstab/pencil.hpp"

namespace swirlstab {

/// Collocation pencil: the four operator equations at the N - 2 interior
/// nodes, the seven boundary equations, and one closure row selected by
/// problem.closure. Requires N >= 5.
Pencil assemble_collocation(const StabilityProblem& problem);

/// The closure row alone, in pencil sign convention.
BoundaryRow collocation_closure_row(const StabilityProblem& problem);

}  // namespace swirlstab
