#pragma once

#include "docksim/common.hpp"

namespace docksim {

// 9-dim relative state the downwash force depends on:
// dp = p_follower - p_leader, plus both absolute velocities (inertial frame).
struct RelativeState9 {
  Vec3 dp = Vec3::Zero();
  Vec3 v_leader = Vec3::Zero();
  Vec3 v_follower = Vec3::Zero();
};

// Rotation-invariant feature vector h plus the angle phi that carries the
// SO(2) group action. Components of h, in order:
//   [0] cosine between the horizontal projections of dp and v_follower
//   [1] |proj(dp)|        [2] |proj(v_follower)|
//   [3] vertical component of dp (leader frame)
//   [4] vertical component of v_follower (leader frame)
//   [5] |proj(v_leader)|
// phi is the angle of proj(dp) from the leader's first body axis, (-pi, pi].
struct Features {
  Vec6 h = Vec6::Zero();
  double phi = 0.0;
};

// Below this projection norm the alignment cosine and phi are zeroed: the
// directly-below configuration is axisymmetric and has no preferred azimuth.
inline constexpr double kDegenerateNorm = 1e-6;

// R_EA maps inertial coordinates into the leader's body frame (the transpose
// of the leader's body->inertial attitude).
Features feature_map(const RelativeState9& x9, const Mat3& R_EA = Mat3::Identity());

// Rotates all horizontal components of x9 by theta about the vertical axis
// (the SO(2) group action on the relative state).
RelativeState9 rotate_state(const RelativeState9& x9, double theta);

inline Mat3 rot_z(double theta) {
  Mat3 R;
  const double c = std::cos(theta), s = std::sin(theta);
  R << c, -s, 0, s, c, 0, 0, 0, 1;
  return R;
}

} // namespace docksim
