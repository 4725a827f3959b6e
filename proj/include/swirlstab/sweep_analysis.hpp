#pragma once

#include <string>
#include <vector>

#include "swirlstab/eigen_engine.hpp"

namespace swirlstab {

/// Assembles the pencil for problem.method.
Pencil assemble(const StabilityProblem& problem);

/// assemble + solve.
Spectrum compute_spectrum(const StabilityProblem& problem, const SolveOptions& options = {});

/// min Im(k) over physical modes inside `window`. Throws NoModeError when
/// there is none.
double growth_rate(const Spectrum& spectrum, const KWindow& window = {});

/// Frequencies min, min + step, ... up to max (inclusive within rounding).
struct SweepGrid {
  double min = 0.0;
  double max = 0.4;
  double step = 0.05;

  /// Throws ParameterError unless min <= max, step > 0 and all are finite.
  std::vector<double> points() const;
};

struct AnalysisOptions {
  SolveOptions solve;
  KWindow window;
  /// Worker threads; 0 picks the hardware concurrency.
  int threads = 0;
};

/// Leading mode at one frequency, or a gap with the reason.
struct SweepPoint {
  double omega = 0.0;
  bool ok = false;
  double growth = 0.0;  // min Im(k)
  double chi = 0.0;     // -growth
  cplx k{};
  double residual = 0.0;
  double residual_max = 0.0;
  int physical = 0;
  std::string error;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  /// Largest chi over successful points and the frequency attaining it
  /// (ties go to the smallest frequency).
  double gr_max = 0.0;
  double omega_cr = 0.0;
  std::size_t index_cr = 0;
  ProblemEcho problem;
};

/// Picks (gr_max, omega_cr) from evaluated points. Throws NoModeError when every point failed.
SweepResult summarize_sweep(std::vector<SweepPoint> points, ProblemEcho problem);

/// One eigenproblem per grid frequency, evaluated concurrently. The result
/// does not depend on the worker count or the order of evaluation.
SweepResult frequency_sweep(const StabilityProblem& base, const SweepGrid& grid,
                            const AnalysisOptions& options = {});

struct ConvergenceRow {
  int n = 0;
  bool ok = false;
  double omega_cr = 0.0;
  double gr_max = 0.0;
  cplx k{};
  double residual = 0.0;
  /// Largest pointwise residual of the leading mode at omega_cr.
  double e_n = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  /// Most frequent omega_cr; ties go to the value seen at the largest N.
  double modal_omega = 0.0;
  /// Latest contiguous run of rows with omega_cr = modal_omega.
  int n_cr_min = 0;
  int n_cr_max = 0;
  /// True when that run reaches the last successful N.
  bool plateau_is_suffix = false;
  /// Per-N sweep points, aligned with rows.
  std::vector<std::vector<SweepPoint>> sweeps;
};

/// Voting and plateau detection over per-N results (rows ascending in N).
ConvergenceReport summarize_convergence(std::vector<ConvergenceRow> rows);

/// Frequency sweep at every N in `n_list` (ascending, each >= 5).
/// quad_order <= 0 selects the default for each N.
ConvergenceReport convergence_study(const StabilityProblem& base, const std::vector<int>& n_list,
                                    const SweepGrid& grid, const AnalysisOptions& options = {},
                                    int quad_order = 0);

}  // namespace swirlstab
