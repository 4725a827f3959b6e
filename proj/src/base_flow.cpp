#include "swirlstab/base_flow.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

#include "swirlstab/errors.hpp"

namespace swirlstab {

BaseFlowProfile::BaseFlowProfile(std::string label, double r_wall, Fn axial, Fn axial_slope,
                                 Fn swirl, Fn swirl_slope, Fn swirl_over_r)
    : label_(std::move(label)),
      r_wall_(r_wall),
      axial_(std::move(axial)),
      axial_slope_(std::move(axial_slope)),
      swirl_(std::move(swirl)),
      swirl_slope_(std::move(swirl_slope)),
      swirl_over_r_(std::move(swirl_over_r)) {
  if (!(r_wall_ > 0.0) || !std::isfinite(r_wall_)) {
    throw ParameterError("r_wall", "must be positive and finite");
  }
  axial_wall_ = axial_(r_wall_);
  swirl_wall_ = swirl_(r_wall_);
}

double BaseFlowProfile::swirl_over_r(double r) const {
  if (swirl_over_r_) return swirl_over_r_(r);
  if (r == 0.0) return swirl_slope_(0.0);
  return swirl_(r) / r;
}

std::shared_ptr<const BaseFlowProfile> batchelor(double q, double a, double r_wall) {
  char label[96];
  std::snprintf(label, sizeof label, "batchelor(q=%.17g,a=%.17g)", q, a);
  // 1 - exp(-r^2) = -expm1(-r^2) keeps W/r accurate near the axis.
  auto over_r = [q](double r) {
    if (r < 1e-8) return q;
    return -q * std::expm1(-r * r) / (r * r);
  };
  return std::make_shared<const BaseFlowProfile>(
      label, r_wall, [a](double r) { return a + std::exp(-r * r); },
      [](double r) { return -2.0 * r * std::exp(-r * r); },
      [over_r](double r) { return r * over_r(r); },
      [q, over_r](double r) { return 2.0 * q * std::exp(-r * r) - over_r(r); }, over_r);
}

std::shared_ptr<const BaseFlowProfile> solid_body(double axial, double rotation, double r_wall) {
  char label[96];
  std::snprintf(label, sizeof label, "solid-body(U=%.17g,Omega=%.17g)", axial, rotation);
  return std::make_shared<const BaseFlowProfile>(
      label, r_wall, [axial](double) { return axial; }, [](double) { return 0.0; },
      [rotation](double r) { return rotation * r; }, [rotation](double) { return rotation; },
      [rotation](double) { return rotation; });
}

namespace {

// Owns one natural cubic spline. Evaluation passes a null accelerator so
// concurrent reads do not share mutable state.
class Spline {
 public:
  Spline(const std::vector<double>& x, const std::vector<double>& y)
      : spline_(gsl_spline_alloc(gsl_interp_cspline, x.size()), &gsl_spline_free),
        lo_(x.front()),
        hi_(x.back()) {
    if (!spline_ || gsl_spline_init(spline_.get(), x.data(), y.data(), x.size()) != GSL_SUCCESS) {
      throw IngestionError("cubic spline construction failed");
    }
  }

  double value(double r) const {
    double out = 0.0;
    gsl_spline_eval_e(spline_.get(), std::clamp(r, lo_, hi_), nullptr, &out);
    return out;
  }

  double slope(double r) const {
    double out = 0.0;
    gsl_spline_eval_deriv_e(spline_.get(), std::clamp(r, lo_, hi_), nullptr, &out);
    return out;
  }

 private:
  std::shared_ptr<gsl_spline> spline_;
  double lo_;
  double hi_;
};

void silence_gsl() {
  static const bool once = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)once;
}

}  // namespace

std::shared_ptr<const BaseFlowProfile> from_table(const ProfileTable& table, std::string label) {
  silence_gsl();
  const auto& s = table.samples;
  if (s.size() < 4) {
    throw IngestionError("profile table needs at least 4 samples, got " + std::to_string(s.size()));
  }
  std::vector<int> bad;
  if (s.front().r != 0.0) bad.push_back(1);
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i].r > s[i - 1].r)) bad.push_back(static_cast<int>(i) + 1);
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s[i].r) || !std::isfinite(s[i].axial) || !std::isfinite(s[i].swirl)) {
      bad.push_back(static_cast<int>(i) + 1);
    }
  }
  if (!bad.empty()) {
    std::sort(bad.begin(), bad.end());
    bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
    throw IngestionError("radii must start at 0 and increase strictly", bad);
  }

  std::vector<double> r, u, w;
  for (const auto& sample : s) {
    r.push_back(sample.r);
    u.push_back(sample.axial);
    w.push_back(sample.swirl);
  }
  auto us = std::make_shared<Spline>(r, u);
  auto ws = std::make_shared<Spline>(r, w);
  return std::make_shared<const BaseFlowProfile>(
      std::move(label), r.back(), [us](double x) { return us->value(x); },
      [us](double x) { return us->slope(x); }, [ws](double x) { return ws->value(x); },
      [ws](double x) { return ws->slope(x); });
}

ProfileTable sample_profile(const BaseFlowProfile& profile, int count) {
  if (count < 2) throw ParameterError("count", "need at least 2 samples");
  ProfileTable table;
  table.samples.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double r = i == count - 1 ? profile.r_wall() : profile.r_wall() * i / (count - 1);
    table.samples.push_back({r, profile.axial(r), profile.swirl(r)});
  }
  return table;
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

bool parse_double(const std::string& field, double& out) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

ProfileTable read_profile_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open profile file " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw IngestionError("empty profile file " + path.string());
  std::string header;
  for (char c : line) {
    if (c != ' ' && c != '\t' && c != '\r') header += c;
  }
  if (header != "r,U,W") {
    throw IngestionError("profile header must be \"r,U,W\", got \"" + trim(line) + "\"", {1});
  }

  ProfileTable table;
  std::vector<int> bad;
  int row = 0;
  while (std::getline(in, line)) {
    const std::string text = trim(line);
    if (text.empty()) continue;
    ++row;
    std::vector<std::string> fields;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    ProfileSample sample{};
    if (fields.size() != 3 || !parse_double(fields[0], sample.r) ||
        !parse_double(fields[1], sample.axial) || !parse_double(fields[2], sample.swirl)) {
      bad.push_back(row);
      continue;
    }
    table.samples.push_back(sample);
  }
  if (!bad.empty()) throw IngestionError("unparseable rows in " + path.string(), bad);
  return table;
}

void write_profile_csv(const ProfileTable& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IngestionError("cannot write profile file " + path.string());
  out << "r,U,W\n";
  char buf[128];
  for (const auto& s : table.samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.r, s.axial, s.swirl);
    out << buf;
  }
}

}  // namespace swirlstab
