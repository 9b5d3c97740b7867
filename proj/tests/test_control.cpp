#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <sstream>

#include "docksim/checks.hpp"
#include "docksim/control.hpp"
#include "docksim/rng.hpp"

using namespace docksim;

TEST_CASE("closed-form CARE gains: unit double integrator and yaw") {
  LqrWeights w;
  w.q_p = Vec3::Ones();
  w.q_v = Vec3::Ones();
  w.r_a = Vec3::Ones();
  w.q_psi = 4.0;
  w.r_psi = 1.0;
  const GainMatrix g = solve_lqr(w, linear_model(0.7));

  // k_p = sqrt(q_p/r) = 1, k_v = sqrt(q_v/r + 2 k_p) = sqrt(3).
  for (int i = 0; i < 3; ++i) {
    CHECK(g.K(i, i) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.K(i, 3 + i) == doctest::Approx(1.7320508075688772).epsilon(1e-12));
  }
  CHECK(g.K(3, 6) == doctest::Approx(2.0).epsilon(1e-12));

  LqrWeights bad;
  bad.q_p[0] = 0.0;
  CHECK_THROWS_AS(solve_lqr(bad, linear_model(0.7)), InvalidParameter);
}

TEST_CASE("closed-form gains match the Kleinman-Newton oracle") {
  std::ostringstream os;
  CHECK(check_care(os));
}

TEST_CASE("random weights give a strictly stable closed loop") {
  Prng rng(3);
  const LinearModel mdl = linear_model(0.7);
  for (int trial = 0; trial < 20; ++trial) {
    LqrWeights w;
    for (int i = 0; i < 3; ++i) {
      w.q_p[i] = rng.uniform(0.1, 100.0);
      w.q_v[i] = rng.uniform(0.1, 50.0);
      w.r_a[i] = rng.uniform(0.1, 10.0);
    }
    w.q_psi = rng.uniform(0.1, 10.0);
    w.r_psi = rng.uniform(0.1, 10.0);
    const GainMatrix g = solve_lqr(w, mdl);
    const Eigen::MatrixXd Acl = mdl.A - mdl.B * g.K;
    Eigen::EigenSolver<Eigen::MatrixXd> es(Acl);
    CHECK(es.eigenvalues().real().maxCoeff() < 0.0);
  }
}

TEST_CASE("feedback arithmetic") {
  LqrWeights w;
  w.q_p = Vec3::Ones();
  w.q_v = Vec3::Ones();
  w.r_a = Vec3::Ones();
  const GainMatrix g = solve_lqr(w, linear_model(0.7));

  Vec7 x = Vec7::Zero(), ref = Vec7::Zero();
  CHECK(feedback(x, ref, Vec3::Zero(), g).a == Vec3::Zero());
  CHECK(feedback(x, ref, Vec3::Zero(), g).psi_dot == 0.0);

  x[2] = 0.1; // 0.1 m error on the down axis, k_p = 1
  const ControlInput u = feedback(x, ref, Vec3::Zero(), g);
  CHECK(u.a.x() == 0.0);
  CHECK(u.a.y() == 0.0);
  CHECK(u.a.z() == doctest::Approx(-0.1).epsilon(1e-12));
}

TEST_CASE("saturation clamps without flipping sign") {
  LqrWeights w;
  const GainMatrix g = solve_lqr(w, linear_model(0.7));
  Vec7 x = Vec7::Zero(), ref = Vec7::Zero();
  x.head<3>() = Vec3(10, -10, 5); // huge errors
  const ControlInput u = feedback(x, ref, Vec3::Zero(), g);
  CHECK(u.a.x() == -kAccelMax);
  CHECK(u.a.y() == kAccelMax);
  CHECK(u.a.z() == -kAccelMax);

  ControlInput base;
  base.a = Vec3(3, -3, 0);
  const ControlInput c = compensate(base, Vec3(20, -20, -20));
  CHECK(c.a.x() == -kAccelMax);
  CHECK(c.a.y() == kAccelMax);
  CHECK(c.a.z() == kAccelMax);
}

TEST_CASE("compensate arithmetic") {
  ControlInput u;
  u.a = Vec3(1, 2, 0);
  u.psi_dot = 0.5;
  CHECK(compensate(u, Vec3::Zero()).a == u.a);
  CHECK(compensate(u, Vec3::Zero()).psi_dot == 0.5);

  ControlInput zero;
  const ControlInput c = compensate(zero, Vec3(0, 0, 6));
  CHECK(c.a == Vec3(0, 0, -6)); // push up against the downwash
}

TEST_CASE("closed loop: 1 m offset converges critically damped") {
  const LqrWeights w; // defaults
  const GainMatrix g = solve_lqr(w, linear_model(0.7));

  VehicleState s;
  s.p = Vec3(1, 0, 0);
  s.m = 0.7;
  const Vec7 ref = Vec7::Zero();
  const double dt_ctl = 0.02, dt_phys = 0.002;
  double min_x = 1.0;
  for (int tick = 0; tick < 250; ++tick) {
    const ControlInput u = feedback(s.state_vector(), ref, Vec3::Zero(), g);
    const InnerLoopCommand cmd = invert_dynamics(u.a, 0.0, s.m);
    for (int i = 0; i < 10; ++i) s = step(s, cmd, Vec3::Zero(), dt_phys);
    min_x = std::min(min_x, s.p.x());
    (void)dt_ctl;
  }
  CHECK(s.p.norm() < 0.01);       // converged
  CHECK(min_x > -0.2);            // no overshoot beyond 20%
}

TEST_CASE("exact cancellation reproduces the disturbance-free trajectory") {
  const LqrWeights w;
  const GainMatrix g = solve_lqr(w, linear_model(0.7));
  const Vec3 f_ext(1.2, -0.8, 4.0);

  auto fly = [&](bool disturbed) {
    VehicleState s;
    s.p = Vec3(0.5, 0.2, -1.0);
    s.m = 0.7;
    const Vec7 ref = Vec7::Zero();
    std::vector<Vec3> traj;
    const double dt = 0.002; // control at the physics rate, ideal attitude
    for (int i = 0; i < 500; ++i) {
      ControlInput u = feedback(s.state_vector(), ref, Vec3::Zero(), g);
      if (disturbed) u = compensate(u, f_ext);
      const InnerLoopCommand cmd = invert_dynamics(u.a, 0.0, s.m);
      s = step(s, cmd, disturbed ? f_ext : Vec3::Zero(), dt, 0.0);
      traj.push_back(s.p);
    }
    return traj;
  };

  const auto clean = fly(false);
  const auto cancelled = fly(true);
  double worst = 0;
  for (size_t i = 0; i < clean.size(); ++i)
    worst = std::max(worst, (clean[i] - cancelled[i]).norm());
  CHECK(worst < 1e-9);
}

namespace {
// Forward-Euler plant matching the observer's internal discretization.
struct LinearPlant {
  Vec7 x = Vec7::Zero();
  void advance(const ControlInput& u, const Vec3& f, double dt) {
    const Vec3 v = x.segment<3>(3);
    x.head<3>() += dt * v;
    x.segment<3>(3) += dt * (u.a + f);
    x[6] += dt * u.psi_dot;
  }
};
} // namespace

TEST_CASE("observer: zero disturbance keeps f_hat at zero") {
  LinearPlant plant;
  ObserverState obs;
  ControlInput u;
  u.a = Vec3(0.3, -0.1, 0.2);
  for (int i = 0; i < 200; ++i) {
    obs = observer_update(obs, plant.x, u, 0.02);
    plant.advance(u, Vec3::Zero(), 0.02);
  }
  CHECK(obs.f_hat.norm() < 1e-12);
}

TEST_CASE("observer: step disturbance reaches 95% in about a second") {
  LinearPlant plant;
  ObserverState obs;
  const Vec3 f(0, 0, 3.0);
  ControlInput u; // hover, zero command
  double t95 = -1;
  double t = 0;
  for (int i = 0; i < 500; ++i) {
    obs = observer_update(obs, plant.x, u, 0.02);
    plant.advance(u, f, 0.02);
    t += 0.02;
    if (t95 < 0 && obs.f_hat.z() >= 0.95 * 3.0) t95 = t;
  }
  REQUIRE(t95 > 0);
  CHECK(t95 > 0.7);
  CHECK(t95 < 1.3);
}

TEST_CASE("observer: fast-varying disturbance leaves a large lag") {
  LinearPlant plant;
  ObserverState obs;
  ControlInput u;
  const double peak = 3.0, period = 0.5;
  double worst_lag = 0;
  double t = 0;
  for (int i = 0; i < 1000; ++i) {
    const Vec3 f(0, 0, peak * std::sin(2 * kPi * t / period));
    obs = observer_update(obs, plant.x, u, 0.02);
    plant.advance(u, f, 0.02);
    t += 0.02;
    if (t > 4.0) worst_lag = std::max(worst_lag, std::abs(obs.f_hat.z() - f.z()));
  }
  // The observer cannot follow dynamics on this timescale; the learned
  // model exists precisely because of this gap.
  CHECK(worst_lag > 0.3 * peak);
}
