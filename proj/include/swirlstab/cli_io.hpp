#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "swirlstab/sweep_analysis.hpp"

namespace swirlstab {

using Json = nlohmann::ordered_json;

/// Where the base flow comes from:
///   batchelor:q=Q,a=A     analytic q-vortex (r_wall from the run)
///   solid-body:U=U,Omega=O  uniform axial flow in rigid rotation
///   file:PATH             CSV table with header r,U,W
struct ProfileSource {
  enum class Kind { batchelor, solid_body, file };
  Kind kind = Kind::batchelor;
  double q = 0.8;
  double a = 0.0;
  double axial = 1.0;
  double rotation = 1.0;
  std::filesystem::path path;

  std::string describe() const;
};

ProfileSource parse_profile(const std::string& text);
/// "min:max:step".
SweepGrid parse_omega_range(const std::string& text);
/// "re_min:re_max:im_min:im_max"; an empty field leaves that side open.
KWindow parse_k_window(const std::string& text);
/// Comma-separated values with optional "a..b" ranges, e.g. "5,8,12..14".
std::vector<int> parse_n_list(const std::string& text);

struct RunConfig {
  Method method = Method::collocation;
  Closure closure = Closure::wall_continuity;
  int m = -1;
  int n = 32;
  std::vector<int> n_list;
  double omega = 0.2;
  SweepGrid grid;
  double r_wall = 1.0;
  bool r_wall_given = false;
  ProfileSource profile;
  SolveOptions solve;
  int quad_order = 0;
  KWindow window;
  std::filesystem::path out = ".";
  bool json = true;
  bool csv = true;
  bool vectors = false;
  int threads = 0;

  /// Throws ParameterError naming the first invalid field.
  void validate() const;
};

/// "json", "csv" or "json,csv".
void parse_formats(const std::string& text, RunConfig& config);

std::shared_ptr<const BaseFlowProfile> load_profile(const RunConfig& config);

/// Problem for one N built from the configuration.
StabilityProblem make_problem(const RunConfig& config, int n);

Json to_json(const ProblemEcho& echo);
ProblemEcho problem_from_json(const Json& j);
Json to_json(const Spectrum& spectrum, bool vectors);
Spectrum spectrum_from_json(const Json& j);

/// %.17g; non-finite values as "nan", "inf" or "-inf".
std::string format_double(double v);

void write_spectrum_json(const Spectrum& spectrum, bool vectors, const std::filesystem::path& path);
Spectrum read_spectrum_json(const std::filesystem::path& path);
/// Columns k_re,k_im,status.
void write_spectrum_csv(const Spectrum& spectrum, const std::filesystem::path& path);

/// Columns omega,chi,k_re,k_im (gaps leave chi and k empty).
void write_sweep_csv(const std::vector<SweepPoint>& points, const std::filesystem::path& path);
/// Same with a leading N column, one block per N.
void write_sweep_csv(const ConvergenceReport& report, const std::filesystem::path& path);
/// Columns N,omega_cr.
void write_convergence_csv(const ConvergenceReport& report, const std::filesystem::path& path);
/// Columns N,E_N.
void write_residual_csv(const ConvergenceReport& report, const std::filesystem::path& path);

/// Configuration and defaults recorded with every result.
Json settings_json(const RunConfig& config);

enum ExitCode { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3 };

/// Writes the artifacts and a short report to `out`. Maps exceptions to exit
/// codes with one diagnostic line on `err`.
int run_spectrum(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace swirlstab
