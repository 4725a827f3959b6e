#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace swirlstab {

/// Columnar base flow: axial velocity U(r) and swirl W(r) on [0, r_wall],
/// with their radial slopes. Immutable; evaluation is thread-safe.
class BaseFlowProfile {
 public:
  using Fn = std::function<double(double)>;

  /// `swirl_over_r` may be empty, in which case W(r)/r is formed directly with
  /// dW/dr(0) as the axis limit.
  BaseFlowProfile(std::string label, double r_wall, Fn axial, Fn axial_slope, Fn swirl,
                  Fn swirl_slope, Fn swirl_over_r = {});

  const std::string& label() const noexcept { return label_; }
  double r_wall() const noexcept { return r_wall_; }

  double axial(double r) const { return axial_(r); }
  double axial_slope(double r) const { return axial_slope_(r); }
  double swirl(double r) const { return swirl_(r); }
  double swirl_slope(double r) const { return swirl_slope_(r); }
  /// W(r)/r with its finite limit on the axis.
  double swirl_over_r(double r) const;

  double axial_wall() const noexcept { return axial_wall_; }
  double swirl_wall() const noexcept { return swirl_wall_; }

 private:
  std::string label_;
  double r_wall_;
  Fn axial_, axial_slope_, swirl_, swirl_slope_, swirl_over_r_;
  double axial_wall_;
  double swirl_wall_;
};

/// Batchelor q-vortex: U = a + exp(-r^2), W = q (1 - exp(-r^2)) / r.
std::shared_ptr<const BaseFlowProfile> batchelor(double q, double a, double r_wall);

/// Solid-body rotation with uniform axial flow: U = axial, W = rotation * r.
std::shared_ptr<const BaseFlowProfile> solid_body(double axial, double rotation, double r_wall);

struct ProfileSample {
  double r;
  double axial;
  double swirl;
};

/// Tabulated (r, U, W) samples, radii strictly increasing from 0 to r_wall.
struct ProfileTable {
  std::vector<ProfileSample> samples;
};

/// Natural cubic spline through the table; slopes come from the spline.
/// Throws IngestionError for fewer than 4 rows, a first radius other than 0,
/// or non-increasing radii (listing the offending rows).
std::shared_ptr<const BaseFlowProfile> from_table(const ProfileTable& table,
                                                  std::string label = "table");

/// `count` samples of `profile` on a uniform radial grid including both ends.
ProfileTable sample_profile(const BaseFlowProfile& profile, int count);

/// CSV with header "r,U,W". Row numbers in errors count data rows from 1,
/// skipping the header and blank lines.
ProfileTable read_profile_csv(const std::filesystem::path& path);
void write_profile_csv(const ProfileTable& table, const std::filesystem::path& path);

}  // namespace swirlstab
