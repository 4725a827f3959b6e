#include "swirlstab/sweep_analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <thread>

#include "swirlstab/collocation_assembly.hpp"
#include "swirlstab/errors.hpp"
#include "swirlstab/projection_assembly.hpp"

namespace swirlstab {

namespace {

int worker_count(int requested, std::size_t tasks) {
  int threads = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(threads, 1);
  return static_cast<int>(std::min<std::size_t>(threads, std::max<std::size_t>(tasks, 1)));
}

// Runs fn(i) for i in [0, count). Each index writes only its own slot, so
// the outcome is independent of scheduling.
template <class Fn>
void parallel_for(std::size_t count, int threads, Fn fn) {
  const int workers = worker_count(threads, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

SweepPoint evaluate(const StabilityProblem& problem, const AnalysisOptions& options) {
  SweepPoint point;
  point.omega = problem.omega;
  try {
    const Spectrum spectrum = compute_spectrum(problem, options.solve);
    point.physical = spectrum.physical;
    const auto lead = leading_mode(spectrum, options.window);
    if (!lead) {
      point.error = "no physical mode";
      return point;
    }
    point.ok = true;
    point.k = lead->k;
    point.growth = lead->k.imag();
    point.chi = -point.growth;
    point.residual = lead->residual;
    point.residual_max = lead->residual_max;
  } catch (const std::exception& e) {
    point.error = e.what();
  }
  return point;
}

}  // namespace

Pencil assemble(const StabilityProblem& problem) {
  return problem.method == Method::projection ? assemble_projection(problem)
                                              : assemble_collocation(problem);
}

Spectrum compute_spectrum(const StabilityProblem& problem, const SolveOptions& options) {
  return solve(assemble(problem), problem, options);
}

double growth_rate(const Spectrum& spectrum, const KWindow& window) {
  const auto lead = leading_mode(spectrum, window);
  if (!lead) throw NoModeError("spectrum has no physical mode");
  return lead->k.imag();
}

std::vector<double> SweepGrid::points() const {
  if (!std::isfinite(min) || !std::isfinite(max) || !std::isfinite(step)) {
    throw ParameterError("omega-range", "bounds and step must be finite");
  }
  if (min > max) throw ParameterError("omega-range", "min must not exceed max");
  if (!(step > 0.0)) throw ParameterError("omega-range", "step must be positive");
  const auto count = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = min + static_cast<double>(i) * step;
  return out;
}

SweepResult summarize_sweep(std::vector<SweepPoint> points, ProblemEcho problem) {
  SweepResult result;
  result.points = std::move(points);
  result.problem = std::move(problem);
  bool found = false;
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    const auto& p = result.points[i];
    if (!p.ok) continue;
    const bool better = !found || p.chi > result.gr_max ||
                        (p.chi == result.gr_max && p.omega < result.omega_cr);
    if (better) {
      found = true;
      result.gr_max = p.chi;
      result.omega_cr = p.omega;
      result.index_cr = i;
    }
  }
  if (!found) throw NoModeError("no frequency of the sweep produced a physical mode");
  return result;
}

SweepResult frequency_sweep(const StabilityProblem& base, const SweepGrid& grid,
                            const AnalysisOptions& options) {
  base.validate();
  const auto omegas = grid.points();
  std::vector<SweepPoint> points(omegas.size());
  parallel_for(omegas.size(), options.threads, [&](std::size_t i) {
    StabilityProblem problem = base;
    problem.omega = omegas[i];
    points[i] = evaluate(problem, options);
  });
  ProblemEcho e = echo(base);
  e.omega = std::numeric_limits<double>::quiet_NaN();
  return summarize_sweep(std::move(points), std::move(e));
}

ConvergenceReport summarize_convergence(std::vector<ConvergenceRow> rows) {
  ConvergenceReport report;
  report.rows = std::move(rows);

  std::map<double, std::pair<int, int>> votes;  // omega -> (count, largest N)
  for (const auto& row : report.rows) {
    if (!row.ok) continue;
    auto& v = votes[row.omega_cr];
    ++v.first;
    v.second = std::max(v.second, row.n);
  }
  if (votes.empty()) throw NoModeError("no N of the convergence study produced a result");
  auto best = votes.begin();
  for (auto it = votes.begin(); it != votes.end(); ++it) {
    if (it->second.first > best->second.first ||
        (it->second.first == best->second.first && it->second.second > best->second.second)) {
      best = it;
    }
  }
  report.modal_omega = best->first;

  int last_ok = -1;
  for (int i = 0; i < static_cast<int>(report.rows.size()); ++i) {
    if (report.rows[i].ok) last_ok = i;
  }
  int end = last_ok;
  while (end >= 0 && !(report.rows[end].ok && report.rows[end].omega_cr == report.modal_omega)) --end;
  int begin = end;
  while (begin > 0 && report.rows[begin - 1].ok &&
         report.rows[begin - 1].omega_cr == report.modal_omega) {
    --begin;
  }
  report.n_cr_min = report.rows[begin].n;
  report.n_cr_max = report.rows[end].n;
  report.plateau_is_suffix = end == last_ok;
  return report;
}

ConvergenceReport convergence_study(const StabilityProblem& base, const std::vector<int>& n_list,
                                    const SweepGrid& grid, const AnalysisOptions& options,
                                    int quad_order) {
  if (n_list.empty()) throw ParameterError("N-list", "empty list");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 5) throw ParameterError("N-list", "every N must be at least 5");
    if (i > 0 && n_list[i] <= n_list[i - 1]) throw ParameterError("N-list", "must be ascending");
  }
  base.validate();
  const auto omegas = grid.points();

  std::vector<StabilityProblem> problems;
  for (int n : n_list) {
    StabilityProblem p = base;
    p.basis = make_context(n, base.r_wall(), quad_order);
    problems.push_back(std::move(p));
  }

  const std::size_t per_n = omegas.size();
  std::vector<SweepPoint> points(n_list.size() * per_n);
  parallel_for(points.size(), options.threads, [&](std::size_t t) {
    StabilityProblem problem = problems[t / per_n];
    problem.omega = omegas[t % per_n];
    points[t] = evaluate(problem, options);
  });

  std::vector<ConvergenceRow> rows;
  std::vector<std::vector<SweepPoint>> sweeps;
  for (std::size_t j = 0; j < n_list.size(); ++j) {
    ConvergenceRow row;
    row.n = n_list[j];
    try {
      sweeps.emplace_back(points.begin() + j * per_n, points.begin() + (j + 1) * per_n);
      const SweepResult sweep = summarize_sweep(sweeps.back(), echo(problems[j]));
      const auto& lead = sweep.points[sweep.index_cr];
      row.ok = true;
      row.omega_cr = sweep.omega_cr;
      row.gr_max = sweep.gr_max;
      row.k = lead.k;
      row.residual = lead.residual;
      row.e_n = lead.residual_max;
    } catch (const NoModeError&) {
      row.ok = false;
    }
    rows.push_back(row);
  }
  ConvergenceReport report = summarize_convergence(std::move(rows));
  report.sweeps = std::move(sweeps);
  return report;
}

}  // namespace swirlstab
