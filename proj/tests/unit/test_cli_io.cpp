#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "swirlstab/cli_io.hpp"
#include "swirlstab/errors.hpp"

using namespace swirlstab;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::path(SWIRLSTAB_TEST_DIR) / "cli_io" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines(const fs::path& path) {
  std::ifstream in(path);
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  return lines;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SWIRLSTAB_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig small_config(const fs::path& out) {
  RunConfig c;
  c.n = 16;
  c.out = out;
  c.threads = 2;
  return c;
}

}  // namespace

TEST_CASE("profile sources") {
  auto p = parse_profile("batchelor:q=0.6,a=0.25");
  CHECK(p.kind == ProfileSource::Kind::batchelor);
  CHECK(p.q == 0.6);
  CHECK(p.a == 0.25);
  p = parse_profile("solid-body:U=2,Omega=0.5");
  CHECK(p.kind == ProfileSource::Kind::solid_body);
  CHECK(p.axial == 2.0);
  CHECK(p.rotation == 0.5);
  p = parse_profile("file:/tmp/x.csv");
  CHECK(p.kind == ProfileSource::Kind::file);
  CHECK(p.path == "/tmp/x.csv");
  CHECK(parse_profile("batchelor").q == 0.8);
  CHECK(parse_profile(parse_profile("batchelor:q=0.7,a=0.1").describe()).q == 0.7);
  CHECK_THROWS_AS(parse_profile("lamb:q=1"), ParameterError);
  CHECK_THROWS_AS(parse_profile("batchelor:U=1"), ParameterError);
  CHECK_THROWS_AS(parse_profile("batchelor:q=abc"), ParameterError);
  CHECK_THROWS_AS(parse_profile("file:"), ParameterError);
}

TEST_CASE("range, window and list parsers") {
  const auto grid = parse_omega_range("0.1:0.3:0.1");
  CHECK(grid.min == 0.1);
  CHECK(grid.points().size() == 3);
  CHECK_THROWS_AS(parse_omega_range("0.1:0.3"), ParameterError);
  CHECK_THROWS_AS(parse_omega_range("0.3:0.1:0.1"), ParameterError);

  const auto w = parse_k_window("0::-1:");
  CHECK(w.re_min == 0.0);
  CHECK(std::isinf(w.re_max));
  CHECK(w.im_min == -1.0);
  CHECK(std::isinf(w.im_max));
  CHECK_THROWS_AS(parse_k_window("1:0::"), ParameterError);
  CHECK_THROWS_AS(parse_k_window("1:2"), ParameterError);

  CHECK(parse_n_list("5,8,12..14") == std::vector<int>{5, 8, 12, 13, 14});
  CHECK_THROWS_AS(parse_n_list("5,x"), ParameterError);
  CHECK_THROWS_AS(parse_n_list("9..7"), ParameterError);

  RunConfig c;
  parse_formats("csv", c);
  CHECK(c.csv);
  CHECK_FALSE(c.json);
  CHECK_THROWS_AS(parse_formats("xml", c), ParameterError);
}

TEST_CASE("configuration validation") {
  RunConfig c;
  CHECK_NOTHROW(c.validate());
  c.m = 2;
  CHECK_THROWS_AS(c.validate(), UnsupportedModeError);
  c = {};
  c.n = 4;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = {};
  c.n_list = {8, 5};
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = {};
  c.solve.epsilon = 0.0;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = {};
  c.r_wall = -1.0;
  CHECK_THROWS_AS(c.validate(), ParameterError);
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(-INFINITY) == "-inf");
  CHECK(std::strtod(format_double(M_PI).c_str(), nullptr) == M_PI);
}

TEST_CASE("spectrum json round trip keeps every bit") {
  const auto dir = fresh_dir("roundtrip");
  RunConfig c = small_config(dir);
  const auto problem = make_problem(c, c.n);
  const auto spectrum = compute_spectrum(problem);
  write_spectrum_json(spectrum, true, dir / "s.json");
  const auto back = read_spectrum_json(dir / "s.json");
  REQUIRE(back.modes.size() == spectrum.modes.size());
  CHECK(back.physical == spectrum.physical);
  CHECK(back.infinite == spectrum.infinite);
  CHECK(back.epsilon == spectrum.epsilon);
  CHECK(back.problem.profile == spectrum.problem.profile);
  CHECK(back.problem.n == 16);
  for (std::size_t i = 0; i < spectrum.modes.size(); ++i) {
    const auto& a = spectrum.modes[i];
    const auto& b = back.modes[i];
    CHECK(a.status == b.status);
    if (a.status == ModeStatus::infinite) {
      CHECK(std::isnan(b.k.real()));
      continue;
    }
    CHECK(std::memcmp(&a.k, &b.k, sizeof(cplx)) == 0);
    CHECK(a.residual == b.residual);
    CHECK(a.field == b.field);
  }
}

TEST_CASE("run_spectrum writes json and csv") {
  const auto dir = fresh_dir("spectrum");
  std::ostringstream out, err;
  RunConfig c = small_config(dir);
  REQUIRE(run_spectrum(c, out, err) == kExitOk);
  CHECK(err.str().empty());
  CHECK(fs::exists(dir / "spectrum.json"));
  CHECK(count_lines(dir / "spectrum.csv") == 1 + 4 * 16);
  CHECK(slurp(dir / "spectrum.csv").rfind("k_re,k_im,status\n", 0) == 0);
  CHECK(out.str().find("modes: 64") != std::string::npos);
}

TEST_CASE("stricter epsilon never adds physical modes") {
  const auto dir = fresh_dir("epsilon");
  RunConfig c = small_config(dir);
  const auto problem = make_problem(c, c.n);
  const auto loose = compute_spectrum(problem);
  const auto strict = compute_spectrum(problem, {1e-12, 1e-10});
  CHECK(strict.physical <= loose.physical);
}

TEST_CASE("sweep outputs") {
  const auto dir = fresh_dir("sweep");
  std::ostringstream out, err;
  RunConfig c = small_config(dir);
  REQUIRE(run_sweep(c, out, err) == kExitOk);
  CHECK(count_lines(dir / "sweep.csv") == 1 + 9);
  const auto summary = Json::parse(slurp(dir / "summary.json"));
  CHECK(summary.contains("settings"));
  CHECK(summary.at("points").size() == 9);

  const auto one = fresh_dir("sweep_one");
  c.out = one;
  c.grid = {0.2, 0.2, 1.0};
  REQUIRE(run_sweep(c, out, err) == kExitOk);
  CHECK(count_lines(one / "sweep.csv") == 2);
}

TEST_CASE("convergence outputs") {
  const auto dir = fresh_dir("convergence");
  std::ostringstream out, err;
  RunConfig c = small_config(dir);
  c.n_list = {8, 12};
  c.grid = {0.1, 0.3, 0.1};
  REQUIRE(run_sweep(c, out, err) == kExitOk);
  CHECK(count_lines(dir / "convergence.csv") == 3);
  CHECK(count_lines(dir / "residual.csv") == 3);
  CHECK(count_lines(dir / "sweep.csv") == 1 + 2 * 3);
  CHECK(slurp(dir / "residual.csv").rfind("N,E_N\n", 0) == 0);
}

TEST_CASE("reruns are byte identical") {
  std::ostringstream out, err;
  const auto a = fresh_dir("rerun_a");
  const auto b = fresh_dir("rerun_b");
  RunConfig c = small_config(a);
  c.threads = 1;
  REQUIRE(run_sweep(c, out, err) == kExitOk);
  c.out = b;
  c.threads = 4;
  REQUIRE(run_sweep(c, out, err) == kExitOk);
  CHECK(slurp(a / "sweep.csv") == slurp(b / "sweep.csv"));
  CHECK(slurp(a / "summary.json") == slurp(b / "summary.json"));
}

TEST_CASE("profile files through the configuration") {
  const auto dir = fresh_dir("profile_file");
  write_profile_csv(sample_profile(*batchelor(0.8, 0.0, 1.0), 101), dir / "flow.csv");
  RunConfig c = small_config(dir);
  c.profile = parse_profile("file:" + (dir / "flow.csv").string());
  CHECK(load_profile(c)->r_wall() == 1.0);
  c.r_wall = 2.0;
  c.r_wall_given = true;
  CHECK_THROWS_AS(load_profile(c), ParameterError);
}

TEST_CASE("command line exit codes") {
  const auto dir = fresh_dir("exit");
  const std::string out = " --out " + dir.string();
  CHECK(run_cli("spectrum --N 12" + out) == 0);
  CHECK(fs::exists(dir / "spectrum.json"));
  CHECK(run_cli("spectrum --N 12 --profile file:/nonexistent/flow.csv" + out) == 2);
  CHECK(run_cli("spectrum --N 12 --m 2" + out) == 2);
  CHECK(run_cli("spectrum --N 3" + out) == 2);
  CHECK(run_cli("spectrum --N 12 --method galerkin" + out) == 2);
  CHECK(run_cli("sweep --N 12 --omega 0.1 --omega-range 0:0.2:0.1" + out) == 2);
  CHECK(run_cli("spectrum --bogus" + out) == 2);
  CHECK(run_cli("sweep --N 16 --omega 0.2 --threads 1" + out) == 0);
  CHECK(count_lines(dir / "sweep.csv") == 2);
}
