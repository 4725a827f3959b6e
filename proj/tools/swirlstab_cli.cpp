#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "swirlstab/cli_io.hpp"
#include "swirlstab/errors.hpp"

namespace {

struct RawOptions {
  std::string method = "collocation";
  std::string closure = "wall_continuity";
  std::string n_list;
  std::string omega_range;
  std::string profile = "batchelor:q=0.8,a=0";
  std::string format = "json,csv";
  std::string k_window;
};

void add_common(CLI::App* cmd, swirlstab::RunConfig& config, RawOptions& raw) {
  cmd->add_option("--method", raw.method, "projection or collocation")->capture_default_str();
  cmd->add_option("--closure", raw.closure, "collocation closure: wall_continuity or axis_parity")
      ->capture_default_str();
  cmd->add_option("--m", config.m, "tangential wavenumber (-1 or 1)")->capture_default_str();
  cmd->add_option("--N", config.n, "number of Chebyshev terms")->capture_default_str();
  cmd->add_option("--r-wall", config.r_wall, "wall radius")->capture_default_str();
  cmd->add_option("--profile", raw.profile,
                  "batchelor:q=Q,a=A | solid-body:U=U,Omega=O | file:PATH")
      ->capture_default_str();
  cmd->add_option("--epsilon", config.solve.epsilon, "residual threshold for physical modes")
      ->capture_default_str();
  cmd->add_option("--beta-min", config.solve.beta_min, "relative threshold for infinite eigenvalues")
      ->capture_default_str();
  cmd->add_option("--quad-order", config.quad_order, "quadrature size (0 = max(2N, 64))")
      ->capture_default_str();
  cmd->add_option("--k-window", raw.k_window,
                  "re_min:re_max:im_min:im_max restricting the leading-mode search");
  cmd->add_option("--out", config.out, "output directory")->capture_default_str();
  cmd->add_option("--format", raw.format, "json, csv or json,csv")->capture_default_str();
}

void finish(swirlstab::RunConfig& config, const RawOptions& raw, const CLI::App* cmd) {
  config.method = swirlstab::parse_method(raw.method);
  config.closure = swirlstab::parse_closure(raw.closure);
  config.profile = swirlstab::parse_profile(raw.profile);
  swirlstab::parse_formats(raw.format, config);
  config.r_wall_given = cmd->count("--r-wall") > 0;
  if (!raw.k_window.empty()) config.window = swirlstab::parse_k_window(raw.k_window);
  if (!raw.n_list.empty()) config.n_list = swirlstab::parse_n_list(raw.n_list);
  if (!raw.omega_range.empty()) config.grid = swirlstab::parse_omega_range(raw.omega_range);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial stability of swirling columnar flows"};
  app.require_subcommand(1);

  swirlstab::RunConfig spectrum_config;
  RawOptions spectrum_raw;
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues k at one frequency");
  add_common(spectrum, spectrum_config, spectrum_raw);
  spectrum->add_option("--omega", spectrum_config.omega, "frequency")->capture_default_str();
  spectrum->add_flag("--vectors", spectrum_config.vectors, "store eigenvectors in spectrum.json");

  swirlstab::RunConfig sweep_config;
  RawOptions sweep_raw;
  auto* sweep = app.add_subcommand("sweep", "growth rate over a frequency range");
  add_common(sweep, sweep_config, sweep_raw);
  sweep->add_option("--omega-range", sweep_raw.omega_range, "min:max:step (default 0:0.4:0.05)");
  sweep->add_option("--omega", sweep_config.omega, "single frequency (same as w:w:1)");
  sweep->add_option("--N-list", sweep_raw.n_list, "convergence study over N, e.g. 5,8,12..16");
  sweep->add_option("--threads", sweep_config.threads, "worker threads (0 = all cores)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : swirlstab::kExitConfig;
  }

  try {
    if (spectrum->parsed()) {
      finish(spectrum_config, spectrum_raw, spectrum);
      return swirlstab::run_spectrum(spectrum_config, std::cout, std::cerr);
    }
    finish(sweep_config, sweep_raw, sweep);
    if (sweep->count("--omega") > 0) {
      if (!sweep_raw.omega_range.empty()) {
        throw swirlstab::ParameterError("omega", "give either --omega or --omega-range");
      }
      sweep_config.grid = {sweep_config.omega, sweep_config.omega, 1.0};
    }
    return swirlstab::run_sweep(sweep_config, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return swirlstab::kExitConfig;
  }
}
