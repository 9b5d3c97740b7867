#include "doctest.h"

#include "docksim/vehicle.hpp"

using namespace docksim;

TEST_CASE("linear model matches the block structure") {
  const LinearModel m = linear_model(0.7);

  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) {
      const double expected = (j == i + 3 && i < 3) ? 1.0 : 0.0;
      CHECK(m.A(i, j) == expected);
    }

  // B routes [a, psidot] into [vdot, psidot].
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(m.B(3 + i, j) == ((j == i) ? 1.0 : 0.0));
  CHECK(m.B(6, 3) == 1.0);
  CHECK(m.B.topRows<3>().isZero(0.0));

  CHECK(m.C.isIdentity(0.0));

  // Disturbance channel: zeros stacked over identity.
  CHECK((m.Bbar.transpose() * m.Bbar).isIdentity(1e-15));
  CHECK(m.Bbar.topRows<3>().isZero(0.0));

  CHECK_THROWS_AS(linear_model(0.0), InvalidParameter);
  CHECK_THROWS_AS(linear_model(-1.0), InvalidParameter);
}

TEST_CASE("inversion: hover command") {
  const InnerLoopCommand cmd = invert_dynamics(Vec3::Zero(), 0.0, 0.7);
  CHECK(cmd.T == doctest::Approx(0.7 * 9.81).epsilon(1e-12));
  CHECK((cmd.R_des - Mat3::Identity()).norm() < 1e-12);
  CHECK(!cmd.thrust_saturated);

  // With yaw, still a pure yaw rotation.
  const InnerLoopCommand cmd_yaw = invert_dynamics(Vec3::Zero(), 0.3, 0.7);
  Mat3 Rz;
  Rz << std::cos(0.3), -std::sin(0.3), 0, std::sin(0.3), std::cos(0.3), 0, 0, 0, 1;
  CHECK((cmd_yaw.R_des - Rz).norm() < 1e-12);
}

TEST_CASE("inversion: lateral acceleration command") {
  const InnerLoopCommand cmd = invert_dynamics(Vec3(2, 0, 0), 0.0, 0.7);
  const double T_expected = 0.7 * std::sqrt(4.0 + 9.81 * 9.81);
  CHECK(cmd.T == doctest::Approx(T_expected).epsilon(1e-12));
  CHECK(cmd.T == doctest::Approx(7.009).epsilon(1e-4));

  // Tilt of the thrust axis from vertical.
  const double tilt = std::acos(cmd.R_des.col(2).dot(Vec3::UnitZ()));
  CHECK(tilt == doctest::Approx(std::atan2(2.0, 9.81)).epsilon(1e-12));
  CHECK(tilt == doctest::Approx(0.2013).epsilon(1e-3));
}

TEST_CASE("inversion: free-fall command saturates with a flag") {
  const InnerLoopCommand cmd = invert_dynamics(Vec3(0, 0, 9.81), 0.0, 0.7);
  CHECK(cmd.thrust_saturated);
  CHECK(cmd.T == doctest::Approx(0.7 * kEpsThrust));
  CHECK(cmd.T >= 0.0);
}

TEST_CASE("inversion round trip: converged attitude reproduces the command") {
  VehicleState s;
  s.m = 0.7;
  const Vec3 a_cmd(1.3, -0.7, 2.1);
  const InnerLoopCommand cmd = invert_dynamics(a_cmd, 0.4, s.m);
  s.R = cmd.R_des;
  const Vec3 a = translational_accel(s, cmd, Vec3::Zero());
  CHECK((a - a_cmd).norm() < 1e-9);

  // And through a full step via finite differences of velocity.
  const double dt = 0.002;
  const VehicleState s2 = step(s, cmd, Vec3::Zero(), dt, 0.0);
  CHECK(((s2.v - s.v) / dt - a_cmd).norm() < 1e-9);
}

TEST_CASE("step: hover equilibrium and disturbance kick") {
  VehicleState s;
  s.m = 0.7;
  const InnerLoopCommand hover = invert_dynamics(Vec3::Zero(), 0.0, s.m);

  const VehicleState s1 = step(s, hover, Vec3::Zero(), 0.002);
  CHECK((s1.v - s.v).norm() < 1e-12);

  const VehicleState s2 = step(s, hover, Vec3(0, 0, 3.0), 0.002);
  CHECK(s2.v.z() == doctest::Approx(0.006).epsilon(1e-12));
}

TEST_CASE("step: validation") {
  VehicleState s;
  const InnerLoopCommand hover = invert_dynamics(Vec3::Zero(), 0.0, s.m);
  CHECK_THROWS_AS(step(s, hover, Vec3::Zero(), 0.0), InvalidParameter);
  CHECK_THROWS_AS(step(s, hover, Vec3::Zero(), 0.02), InvalidParameter);
  Vec3 bad(0, 0, std::nan(""));
  CHECK_THROWS_AS(step(s, hover, bad, 0.002), SimulationFault);
}

TEST_CASE("step: fine-step reference integrator agrees") {
  // Constant small tilt command from hover; compare against the same
  // integrator at 10x finer resolution over 1 s.
  const Vec3 a_cmd(0.05, 0, 0);
  const InnerLoopCommand cmd = invert_dynamics(a_cmd, 0.0, 0.7);

  auto integrate = [&](double dt) {
    VehicleState s;
    s.m = 0.7;
    const long n = std::lround(1.0 / dt);
    for (long i = 0; i < n; ++i) s = step(s, cmd, Vec3::Zero(), dt);
    return s;
  };
  const VehicleState coarse = integrate(0.002);
  const VehicleState fine = integrate(0.0002);
  CHECK((coarse.p - fine.p).norm() < 1e-4);
}

TEST_CASE("step: ballistic fall matches the analytic solution to O(dt) globally") {
  VehicleState s;
  s.m = 0.7;
  InnerLoopCommand no_thrust;
  no_thrust.T = 0.0;
  const double dt = 0.002, T = 1.0;
  const long n = std::lround(T / dt);
  for (long i = 0; i < n; ++i) s = step(s, no_thrust, Vec3::Zero(), dt);
  const double p_exact = 0.5 * kGravity * T * T;
  // Semi-implicit Euler: O(dt^2) local error accumulating to O(dt) over T.
  CHECK(std::abs(s.p.z() - p_exact) <= 0.5 * kGravity * T * dt * 1.01);
  CHECK(s.v.z() == doctest::Approx(kGravity * T).epsilon(1e-12));
}

TEST_CASE("step: attitude stays orthonormal and converges to the command") {
  VehicleState s;
  s.m = 0.7;
  const InnerLoopCommand cmd = invert_dynamics(Vec3(1.5, -2.0, 1.0), 0.7, s.m);
  for (int i = 0; i < 1000; ++i) {
    s = step(s, cmd, Vec3::Zero(), 0.002, 0.05);
    CHECK((s.R.transpose() * s.R - Mat3::Identity()).norm() < 1e-9);
  }
  // 2 s >> tau_att = 0.05 s: attitude fully converged.
  CHECK((s.R - cmd.R_des).norm() < 1e-9);
}

TEST_CASE("step: determinism") {
  VehicleState s;
  s.v = Vec3(0.1, 0.2, -0.3);
  const InnerLoopCommand cmd = invert_dynamics(Vec3(0.5, 0.1, -0.2), 0.1, s.m);
  const VehicleState a = step(s, cmd, Vec3(0.1, 0, 0.2), 0.002);
  const VehicleState b = step(s, cmd, Vec3(0.1, 0, 0.2), 0.002);
  CHECK(a.p == b.p);
  CHECK(a.v == b.v);
  CHECK(a.R == b.R);
}
