#include "docksim/features.hpp"

namespace docksim {

Features feature_map(const RelativeState9& x9, const Mat3& R_EA) {
  const Vec3 dp = R_EA * x9.dp;
  const Vec3 va = R_EA * x9.v_leader;
  const Vec3 vb = R_EA * x9.v_follower;

  const Eigen::Vector2d dp_h = dp.head<2>();
  const Eigen::Vector2d va_h = va.head<2>();
  const Eigen::Vector2d vb_h = vb.head<2>();
  const double n_dp = dp_h.norm();
  const double n_vb = vb_h.norm();

  Features f;
  f.h[0] = (n_dp > kDegenerateNorm && n_vb > kDegenerateNorm)
               ? dp_h.dot(vb_h) / (n_dp * n_vb)
               : 0.0;
  f.h[1] = n_dp;
  f.h[2] = n_vb;
  f.h[3] = dp.z();
  f.h[4] = vb.z();
  f.h[5] = va_h.norm();
  f.phi = (n_dp > kDegenerateNorm) ? std::atan2(dp_h.y(), dp_h.x()) : 0.0;
  return f;
}

RelativeState9 rotate_state(const RelativeState9& x9, double theta) {
  const Mat3 R = rot_z(theta);
  RelativeState9 out;
  out.dp = R * x9.dp;
  out.v_leader = R * x9.v_leader;
  out.v_follower = R * x9.v_follower;
  return out;
}

} // namespace docksim
