#include "swirlstab/eigen_engine.hpp"

#include <algorithm>
#include <complex>
#include <cmath>
#include <mutex>
#include <numeric>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "swirlstab/errors.hpp"
#include "swirlstab/projection_assembly.hpp"

extern "C" void openblas_set_num_threads(int) __attribute__((weak));

namespace swirlstab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kSignificant = 1e-6;

// Threaded BLAS kernels may reorder floating-point reductions between runs.
void single_threaded_blas() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    if (openblas_set_num_threads) openblas_set_num_threads(1);
  });
}

Eigen::VectorXcd normalized(Eigen::VectorXcd v) {
  const double norm = v.norm();
  if (norm == 0.0 || !std::isfinite(norm)) return v;
  v /= norm;
  const double largest = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]);
    if (mag >= kSignificant * largest) {
      v *= std::conj(v[i]) / mag;
      v[i] = mag;
      break;
    }
  }
  return v;
}

void count(Spectrum& spectrum) {
  spectrum.physical = spectrum.spurious = spectrum.infinite = 0;
  for (const auto& mode : spectrum.modes) {
    switch (mode.status) {
      case ModeStatus::physical: ++spectrum.physical; break;
      case ModeStatus::spurious: ++spectrum.spurious; break;
      case ModeStatus::infinite: ++spectrum.infinite; break;
    }
  }
}

void sort_modes(std::vector<EigenMode>& modes) {
  std::stable_sort(modes.begin(), modes.end(), [](const EigenMode& a, const EigenMode& b) {
    const bool a_inf = a.status == ModeStatus::infinite;
    const bool b_inf = b.status == ModeStatus::infinite;
    if (a_inf || b_inf) return !a_inf && b_inf;
    if (a.k.imag() != b.k.imag()) return a.k.imag() < b.k.imag();
    return a.k.real() < b.k.real();
  });
}

}  // namespace

std::string to_string(ModeStatus status) {
  switch (status) {
    case ModeStatus::physical: return "physical";
    case ModeStatus::spurious: return "spurious";
    case ModeStatus::infinite: return "infinite";
  }
  return "spurious";
}

ModeStatus parse_status(const std::string& name) {
  if (name == "physical") return ModeStatus::physical;
  if (name == "spurious") return ModeStatus::spurious;
  if (name == "infinite") return ModeStatus::infinite;
  throw ParameterError("status", "unknown mode status \"" + name + "\"");
}

ProblemEcho echo(const StabilityProblem& problem) {
  return {problem.m,
          problem.omega,
          problem.size(),
          problem.r_wall(),
          problem.method,
          problem.closure,
          problem.flow ? problem.flow->label() : std::string(),
          problem.method == Method::projection ? projection_quad_order(*problem.basis)
                                               : problem.basis->quad_order()};
}

GeneralizedEigen generalized_eigen(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows() || a.rows() == 0) {
    throw StructuralError("generalized eigenproblem needs two square matrices of equal size");
  }
  single_threaded_blas();
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::MatrixXcd aa = a;
  Eigen::MatrixXcd bb = b;
  GeneralizedEigen out{Eigen::VectorXcd(n), Eigen::VectorXcd(n), Eigen::MatrixXcd(n, n)};
  cplx unused_left;
  const lapack_int info =
      LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'V', n, aa.data(), n, bb.data(), n, out.alpha.data(),
                    out.beta.data(), &unused_left, 1, out.vectors.data(), n);
  if (info != 0) {
    throw NumericalError("QZ reduction failed (info = " + std::to_string(info) + ")");
  }
  return out;
}

Spectrum eigenpairs(const Pencil& pencil, double beta_min) {
  if (!(beta_min > 0.0)) throw ParameterError("beta_min", "must be positive");
  if (pencil.m.rows() != pencil.m.cols() || pencil.mk.rows() != pencil.mk.cols() ||
      pencil.m.rows() != pencil.mk.rows()) {
    throw StructuralError("pencil matrices must be square and of equal size");
  }
  const GeneralizedEigen ge = generalized_eigen(pencil.m, pencil.mk);
  const double threshold = beta_min * pencil.mk.norm();

  Spectrum spectrum;
  spectrum.beta_min = beta_min;
  spectrum.modes.reserve(ge.alpha.size());
  for (Eigen::Index j = 0; j < ge.alpha.size(); ++j) {
    EigenMode mode;
    if (std::abs(ge.beta[j]) < threshold || std::abs(ge.beta[j]) == 0.0) {
      mode.k = {kNaN, kNaN};
      mode.residual = mode.residual_max = kNaN;
      mode.status = ModeStatus::infinite;
    } else {
      mode.k = ge.alpha[j] / ge.beta[j];
      mode.field = normalized(ge.vectors.col(j));
      mode.status = ModeStatus::spurious;
    }
    spectrum.modes.push_back(std::move(mode));
  }
  sort_modes(spectrum.modes);
  count(spectrum);
  return spectrum;
}

Spectrum solve(const Pencil& pencil, const StabilityProblem& problem, const SolveOptions& options) {
  if (!(options.epsilon > 0.0)) throw ParameterError("epsilon", "must be positive");
  pencil.check();
  problem.validate();
  if (pencil.size() != 4 * problem.size()) {
    throw StructuralError("pencil size " + std::to_string(pencil.size()) + " does not match 4N = " +
                          std::to_string(4 * problem.size()));
  }
  Spectrum spectrum;
  try {
    spectrum = eigenpairs(pencil, options.beta_min);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(e.what()) + " for m = " + std::to_string(problem.m) +
                         ", omega = " + std::to_string(problem.omega) +
                         ", N = " + std::to_string(problem.size()) + ", method " +
                         to_string(problem.method) + ", profile " + problem.flow->label());
  }
  spectrum.problem = echo(problem);

  const ResidualOperator residual(problem);
  for (auto& mode : spectrum.modes) {
    if (mode.status == ModeStatus::infinite) continue;
    const auto profile = residual.profile(mode.field, mode.k);
    double sum = 0.0;
    double largest = 0.0;
    for (double v : profile) {
      sum += v * v;
      largest = std::max(largest, v);
    }
    mode.residual = std::sqrt(sum / profile.size());
    mode.residual_max = largest;
  }
  classify(spectrum, options.epsilon);
  sort_modes(spectrum.modes);
  return spectrum;
}

void classify(Spectrum& spectrum, double epsilon) {
  if (!(epsilon > 0.0)) throw ParameterError("epsilon", "must be positive");
  spectrum.epsilon = epsilon;
  for (auto& mode : spectrum.modes) {
    if (mode.status == ModeStatus::infinite) continue;
    const bool ok = std::isfinite(mode.k.real()) && std::isfinite(mode.k.imag()) &&
                    mode.residual <= epsilon;
    mode.status = ok ? ModeStatus::physical : ModeStatus::spurious;
  }
  count(spectrum);
}

bool KWindow::contains(cplx k) const {
  return k.real() >= re_min && k.real() <= re_max && k.imag() >= im_min && k.imag() <= im_max;
}

bool KWindow::bounded() const {
  return std::isfinite(re_min) || std::isfinite(re_max) || std::isfinite(im_min) ||
         std::isfinite(im_max);
}

std::optional<EigenMode> leading_mode(const Spectrum& spectrum, const KWindow& window) {
  const EigenMode* best = nullptr;
  for (const auto& mode : spectrum.modes) {
    if (mode.status != ModeStatus::physical || !window.contains(mode.k)) continue;
    if (!best || mode.k.imag() < best->k.imag() ||
        (mode.k.imag() == best->k.imag() && mode.k.real() < best->k.real())) {
      best = &mode;
    }
  }
  if (!best) return std::nullopt;
  return *best;
}

double pencil_residual(const Pencil& pencil, const EigenMode& mode) {
  if (mode.status == ModeStatus::infinite) return kNaN;
  const double scale = pencil.m.norm() * mode.field.norm();
  if (scale == 0.0) return 0.0;
  return (pencil.m * mode.field - mode.k * (pencil.mk * mode.field)).norm() / scale;
}

}  // namespace swirlstab
