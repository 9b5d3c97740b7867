#include "docksim/downwash_field.hpp"

namespace docksim {

void FieldParams::validate() const {
  if (!(w0 > 0 && z_c > 0 && sigma0 > 0 && k_spread > 0 && c_a > 0 && turb_tau > 0))
    throw InvalidParameter("FieldParams: w0, z_c, sigma0, k_spread, c_a, turb_tau must be positive");
  if (!(lambda_r >= 0 && lambda_r < 1) || !(turb_std_frac >= 0 && turb_std_frac < 1))
    throw InvalidParameter("FieldParams: lambda_r and turb_std_frac must lie in [0, 1)");
}

Vec3 mean_force(const VehicleState& leader, const VehicleState& follower,
                const FieldParams& params) {
  const Vec3 d = follower.p - leader.p;
  const double dz = d.z(); // > 0 when the follower is below the leader (NED)
  if (dz <= 0.0) return Vec3::Zero();

  const Eigen::Vector2d rvec(d.x(), d.y());
  const double r = rvec.norm();
  const double sigma = params.sigma0 + params.k_spread * dz;
  const double w = params.w0 * params.z_c / (params.z_c + dz) *
                   std::exp(-r * r / (2.0 * sigma * sigma));
  const double axial = params.c_a * w * w; // pushes the follower down (+z)

  Vec3 f(0, 0, axial);
  if (r > 1e-12) {
    const double radial = params.lambda_r * axial * (r / sigma);
    f.head<2>() = radial * (rvec / r);
  }
  return f;
}

Vec3 sample_force(const Vec3& mean, TurbulenceState& turb,
                  const FieldParams& params, double dt) {
  if (!(dt > 0.0)) throw InvalidParameter("sample_force: dt must be positive");
  const double alpha = std::exp(-dt / params.turb_tau);
  // Per-axis std so that the stationary vector magnitude std is
  // turb_std_frac * |mean|.
  const double sigma_axis = params.turb_std_frac * mean.norm() / std::sqrt(3.0);
  const double kick = sigma_axis * std::sqrt(1.0 - alpha * alpha);
  for (int i = 0; i < 3; ++i)
    turb.ou[i] = alpha * turb.ou[i] + kick * turb.rng.gaussian();
  return mean + turb.ou;
}

} // namespace docksim
