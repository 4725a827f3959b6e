#include "swirlstab/cli_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "swirlstab/errors.hpp"

namespace swirlstab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

double parse_number(const std::string& field, const std::string& text) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || begin == end) {
    throw ParameterError(field, "not a number: \"" + text + "\"");
  }
  return v;
}

int parse_int(const std::string& field, const std::string& text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ParameterError(field, "not an integer: \"" + text + "\"");
  }
  return v;
}

double number_or_nan(const Json& j) { return j.is_null() ? kNaN : j.get<double>(); }

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("out", "cannot write " + path.string());
  return out;
}

void write_json(const Json& j, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

Json window_json(const KWindow& w) {
  auto side = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
  return Json{{"re_min", side(w.re_min)},
              {"re_max", side(w.re_max)},
              {"im_min", side(w.im_min)},
              {"im_max", side(w.im_max)}};
}

Json point_json(const SweepPoint& p) {
  Json j{{"omega", p.omega}, {"ok", p.ok}};
  if (p.ok) {
    j["chi"] = p.chi;
    j["k_re"] = p.k.real();
    j["k_im"] = p.k.imag();
    j["residual"] = p.residual;
  } else {
    j["error"] = p.error;
  }
  return j;
}

template <class Fn>
int guarded(std::ostream& err, Fn fn) {
  try {
    fn();
    return kExitOk;
  } catch (const ParameterError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IngestionError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SingularTensorError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "input error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace

std::string ProfileSource::describe() const {
  switch (kind) {
    case Kind::batchelor: return "batchelor:q=" + format_double(q) + ",a=" + format_double(a);
    case Kind::solid_body:
      return "solid-body:U=" + format_double(axial) + ",Omega=" + format_double(rotation);
    case Kind::file: return "file:" + path.string();
  }
  return {};
}

ProfileSource parse_profile(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? std::string() : text.substr(colon + 1);
  ProfileSource src;
  if (kind == "file") {
    if (rest.empty()) throw ParameterError("profile", "file: needs a path");
    src.kind = ProfileSource::Kind::file;
    src.path = rest;
    return src;
  }
  if (kind == "batchelor") {
    src.kind = ProfileSource::Kind::batchelor;
  } else if (kind == "solid-body") {
    src.kind = ProfileSource::Kind::solid_body;
  } else {
    throw ParameterError("profile", "expected batchelor:, solid-body: or file:, got \"" + text + "\"");
  }
  if (rest.empty()) return src;
  for (const auto& item : split(rest, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ParameterError("profile", "expected key=value, got \"" + item + "\"");
    const std::string key = item.substr(0, eq);
    const double value = parse_number("profile", item.substr(eq + 1));
    if (src.kind == ProfileSource::Kind::batchelor && key == "q") {
      src.q = value;
    } else if (src.kind == ProfileSource::Kind::batchelor && key == "a") {
      src.a = value;
    } else if (src.kind == ProfileSource::Kind::solid_body && key == "U") {
      src.axial = value;
    } else if (src.kind == ProfileSource::Kind::solid_body && key == "Omega") {
      src.rotation = value;
    } else {
      throw ParameterError("profile", "unknown parameter \"" + key + "\" for " + kind);
    }
  }
  return src;
}

SweepGrid parse_omega_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw ParameterError("omega-range", "expected min:max:step");
  SweepGrid grid{parse_number("omega-range", parts[0]), parse_number("omega-range", parts[1]),
                 parse_number("omega-range", parts[2])};
  grid.points();
  return grid;
}

KWindow parse_k_window(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 4) throw ParameterError("k-window", "expected re_min:re_max:im_min:im_max");
  KWindow w;
  double* sides[] = {&w.re_min, &w.re_max, &w.im_min, &w.im_max};
  for (int i = 0; i < 4; ++i) {
    if (!parts[i].empty()) *sides[i] = parse_number("k-window", parts[i]);
  }
  if (w.re_min > w.re_max || w.im_min > w.im_max) {
    throw ParameterError("k-window", "empty window");
  }
  return w;
}

std::vector<int> parse_n_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_int("N-list", item));
      continue;
    }
    const int lo = parse_int("N-list", item.substr(0, dots));
    const int hi = parse_int("N-list", item.substr(dots + 2));
    if (lo > hi) throw ParameterError("N-list", "empty range " + item);
    for (int n = lo; n <= hi; ++n) out.push_back(n);
  }
  if (out.empty()) throw ParameterError("N-list", "empty list");
  return out;
}

void parse_formats(const std::string& text, RunConfig& config) {
  config.json = config.csv = false;
  for (const auto& item : split(text, ',')) {
    if (item == "json") {
      config.json = true;
    } else if (item == "csv") {
      config.csv = true;
    } else {
      throw ParameterError("format", "expected json and/or csv, got \"" + item + "\"");
    }
  }
}

void RunConfig::validate() const {
  if (m != 1 && m != -1) throw UnsupportedModeError(m);
  if (n < 5) throw ParameterError("N", "must be at least 5");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 5) throw ParameterError("N-list", "every N must be at least 5");
    if (i > 0 && n_list[i] <= n_list[i - 1]) throw ParameterError("N-list", "must be ascending");
  }
  if (!std::isfinite(omega)) throw ParameterError("omega", "must be finite");
  grid.points();
  if (!(r_wall > 0.0) || !std::isfinite(r_wall)) throw ParameterError("r-wall", "must be positive");
  if (!(solve.epsilon > 0.0)) throw ParameterError("epsilon", "must be positive");
  if (!(solve.beta_min > 0.0)) throw ParameterError("beta-min", "must be positive");
  if (quad_order < 0) throw ParameterError("quad-order", "must be non-negative");
  if (threads < 0) throw ParameterError("threads", "must be non-negative");
  if (!json && !csv) throw ParameterError("format", "no output format selected");
}

std::shared_ptr<const BaseFlowProfile> load_profile(const RunConfig& config) {
  switch (config.profile.kind) {
    case ProfileSource::Kind::batchelor:
      return batchelor(config.profile.q, config.profile.a, config.r_wall);
    case ProfileSource::Kind::solid_body:
      return solid_body(config.profile.axial, config.profile.rotation, config.r_wall);
    case ProfileSource::Kind::file: {
      auto flow = from_table(read_profile_csv(config.profile.path), config.profile.describe());
      if (config.r_wall_given && std::abs(flow->r_wall() - config.r_wall) > 1e-12 * config.r_wall) {
        throw ParameterError("r-wall", "profile table ends at r = " + format_double(flow->r_wall()) +
                                           ", not at --r-wall " + format_double(config.r_wall));
      }
      return flow;
    }
  }
  throw ParameterError("profile", "unknown source");
}

StabilityProblem make_problem(const RunConfig& config, int n) {
  StabilityProblem problem;
  problem.m = config.m;
  problem.omega = config.omega;
  problem.flow = load_profile(config);
  problem.basis = make_context(n, problem.flow->r_wall(), config.quad_order);
  problem.method = config.method;
  problem.closure = config.closure;
  problem.validate();
  return problem;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json to_json(const ProblemEcho& e) {
  return Json{{"m", e.m},
              {"omega", std::isfinite(e.omega) ? Json(e.omega) : Json(nullptr)},
              {"N", e.n},
              {"r_wall", e.r_wall},
              {"method", to_string(e.method)},
              {"closure", to_string(e.closure)},
              {"profile", e.profile},
              {"quad_order", e.quad_order}};
}

ProblemEcho problem_from_json(const Json& j) {
  ProblemEcho e;
  e.m = j.at("m").get<int>();
  e.omega = number_or_nan(j.at("omega"));
  e.n = j.at("N").get<int>();
  e.r_wall = j.at("r_wall").get<double>();
  e.method = parse_method(j.at("method").get<std::string>());
  e.closure = parse_closure(j.at("closure").get<std::string>());
  e.profile = j.at("profile").get<std::string>();
  e.quad_order = j.at("quad_order").get<int>();
  return e;
}

Json to_json(const Spectrum& s, bool vectors) {
  Json modes = Json::array();
  for (const auto& mode : s.modes) {
    Json j{{"k_re", mode.k.real()},
           {"k_im", mode.k.imag()},
           {"residual", mode.residual},
           {"residual_max", mode.residual_max},
           {"status", to_string(mode.status)}};
    if (vectors && mode.field.size() > 0) {
      std::vector<double> re(mode.field.size());
      std::vector<double> im(mode.field.size());
      for (Eigen::Index i = 0; i < mode.field.size(); ++i) {
        re[i] = mode.field[i].real();
        im[i] = mode.field[i].imag();
      }
      j["field_re"] = re;
      j["field_im"] = im;
    }
    modes.push_back(std::move(j));
  }
  return Json{{"problem", to_json(s.problem)},
              {"settings", {{"epsilon", s.epsilon}, {"beta_min", s.beta_min}}},
              {"counts", {{"physical", s.physical}, {"spurious", s.spurious}, {"infinite", s.infinite}}},
              {"modes", std::move(modes)}};
}

Spectrum spectrum_from_json(const Json& j) {
  Spectrum s;
  s.problem = problem_from_json(j.at("problem"));
  s.epsilon = j.at("settings").at("epsilon").get<double>();
  s.beta_min = j.at("settings").at("beta_min").get<double>();
  s.physical = j.at("counts").at("physical").get<int>();
  s.spurious = j.at("counts").at("spurious").get<int>();
  s.infinite = j.at("counts").at("infinite").get<int>();
  for (const auto& jm : j.at("modes")) {
    EigenMode mode;
    mode.k = {number_or_nan(jm.at("k_re")), number_or_nan(jm.at("k_im"))};
    mode.residual = number_or_nan(jm.at("residual"));
    mode.residual_max = number_or_nan(jm.at("residual_max"));
    mode.status = parse_status(jm.at("status").get<std::string>());
    if (jm.contains("field_re")) {
      const auto re = jm.at("field_re").get<std::vector<double>>();
      const auto im = jm.at("field_im").get<std::vector<double>>();
      mode.field.resize(static_cast<Eigen::Index>(re.size()));
      for (std::size_t i = 0; i < re.size(); ++i) mode.field[i] = {re[i], im[i]};
    }
    s.modes.push_back(std::move(mode));
  }
  return s;
}

void write_spectrum_json(const Spectrum& spectrum, bool vectors, const std::filesystem::path& path) {
  write_json(to_json(spectrum, vectors), path);
}

Spectrum read_spectrum_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open " + path.string());
  try {
    return spectrum_from_json(Json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw IngestionError("malformed spectrum file " + path.string() + ": " + e.what());
  }
}

void write_spectrum_csv(const Spectrum& spectrum, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "k_re,k_im,status\n";
  for (const auto& mode : spectrum.modes) {
    out << format_double(mode.k.real()) << ',' << format_double(mode.k.imag()) << ','
        << to_string(mode.status) << '\n';
  }
}

namespace {

void sweep_rows(std::ostream& out, const std::vector<SweepPoint>& points, const std::string& prefix) {
  for (const auto& p : points) {
    out << prefix << format_double(p.omega) << ',';
    if (p.ok) {
      out << format_double(p.chi) << ',' << format_double(p.k.real()) << ','
          << format_double(p.k.imag());
    } else {
      out << ",,";
    }
    out << '\n';
  }
}

}  // namespace

void write_sweep_csv(const std::vector<SweepPoint>& points, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "omega,chi,k_re,k_im\n";
  sweep_rows(out, points, "");
}

void write_sweep_csv(const ConvergenceReport& report, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "N,omega,chi,k_re,k_im\n";
  for (std::size_t j = 0; j < report.rows.size() && j < report.sweeps.size(); ++j) {
    sweep_rows(out, report.sweeps[j], std::to_string(report.rows[j].n) + ",");
  }
}

void write_convergence_csv(const ConvergenceReport& report, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "N,omega_cr\n";
  for (const auto& row : report.rows) {
    out << row.n << ',' << (row.ok ? format_double(row.omega_cr) : std::string()) << '\n';
  }
}

void write_residual_csv(const ConvergenceReport& report, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "N,E_N\n";
  for (const auto& row : report.rows) {
    out << row.n << ',' << (row.ok ? format_double(row.e_n) : std::string()) << '\n';
  }
}

Json settings_json(const RunConfig& c) {
  Json j{{"method", to_string(c.method)},
         {"closure", to_string(c.closure)},
         {"m", c.m},
         {"r_wall", c.r_wall},
         {"profile", c.profile.describe()},
         {"epsilon", c.solve.epsilon},
         {"beta_min", c.solve.beta_min},
         {"k_window", window_json(c.window)}};
  if (c.quad_order > 0) {
    j["quad_order"] = c.quad_order;
  } else {
    j["quad_order"] = "max(2N, 64)";
  }
  j["projection_quad_order"] = "max(quad_order, 2N + 8)";
  return j;
}

int run_spectrum(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    std::filesystem::create_directories(config.out);
    const StabilityProblem problem = make_problem(config, config.n);
    const Spectrum spectrum = compute_spectrum(problem, config.solve);
    if (config.json) write_spectrum_json(spectrum, config.vectors, config.out / "spectrum.json");
    if (config.csv) write_spectrum_csv(spectrum, config.out / "spectrum.csv");
    out << "modes: " << spectrum.modes.size() << " (physical " << spectrum.physical << ", spurious "
        << spectrum.spurious << ", infinite " << spectrum.infinite << ")\n";
    if (const auto lead = leading_mode(spectrum, config.window)) {
      out << "leading k = " << format_double(lead->k.real()) << " " << format_double(lead->k.imag())
          << "i, residual " << format_double(lead->residual) << '\n';
    } else {
      out << "no physical mode\n";
    }
  });
}

int run_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    std::filesystem::create_directories(config.out);
    AnalysisOptions options{config.solve, config.window, config.threads};
    Json summary{{"settings", settings_json(config)},
                 {"omega_range",
                  {{"min", config.grid.min}, {"max", config.grid.max}, {"step", config.grid.step}}}};

    if (config.n_list.empty()) {
      const StabilityProblem problem = make_problem(config, config.n);
      const SweepResult sweep = frequency_sweep(problem, config.grid, options);
      if (config.csv) write_sweep_csv(sweep.points, config.out / "sweep.csv");
      summary["problem"] = to_json(sweep.problem);
      summary["gr_max"] = sweep.gr_max;
      summary["omega_cr"] = sweep.omega_cr;
      Json points = Json::array();
      for (const auto& p : sweep.points) points.push_back(point_json(p));
      summary["points"] = std::move(points);
      out << "omega_cr = " << format_double(sweep.omega_cr) << ", gr_max = "
          << format_double(sweep.gr_max) << '\n';
    } else {
      const StabilityProblem problem = make_problem(config, config.n_list.front());
      const ConvergenceReport report =
          convergence_study(problem, config.n_list, config.grid, options, config.quad_order);
      if (config.csv) {
        write_sweep_csv(report, config.out / "sweep.csv");
        write_convergence_csv(report, config.out / "convergence.csv");
        write_residual_csv(report, config.out / "residual.csv");
      }
      Json problem_json = to_json(echo(problem));
      problem_json.erase("N");
      problem_json.erase("quad_order");
      problem_json["omega"] = nullptr;
      summary["problem"] = std::move(problem_json);
      Json rows = Json::array();
      for (const auto& row : report.rows) {
        Json r{{"N", row.n}, {"ok", row.ok}};
        if (row.ok) {
          r["omega_cr"] = row.omega_cr;
          r["gr_max"] = row.gr_max;
          r["k_re"] = row.k.real();
          r["k_im"] = row.k.imag();
          r["residual"] = row.residual;
          r["E_N"] = row.e_n;
        }
        rows.push_back(std::move(r));
      }
      summary["convergence"] = {{"rows", std::move(rows)},
                                {"modal_omega", report.modal_omega},
                                {"N_cr_min", report.n_cr_min},
                                {"N_cr_max", report.n_cr_max},
                                {"plateau_is_suffix", report.plateau_is_suffix}};
      const auto& last = report.rows.back();
      if (last.ok) {
        summary["gr_max"] = last.gr_max;
        summary["omega_cr"] = last.omega_cr;
      }
      out << "modal omega_cr = " << format_double(report.modal_omega) << ", plateau N = "
          << report.n_cr_min << ".." << report.n_cr_max << '\n';
    }
    if (config.json) write_json(summary, config.out / "summary.json");
  });
}

}  // namespace swirlstab
