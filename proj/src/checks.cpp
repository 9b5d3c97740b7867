#include "docksim/checks.hpp"

#include <Eigen/Eigenvalues>

#include "docksim/control.hpp"
#include "docksim/rng.hpp"

namespace docksim {

namespace {

RelativeState9 random_state(Prng& rng) {
  RelativeState9 x;
  for (int i = 0; i < 3; ++i) {
    x.dp[i] = rng.uniform(-1.5, 1.5);
    x.v_leader[i] = rng.uniform(-0.5, 0.5);
    x.v_follower[i] = rng.uniform(-0.8, 0.8);
  }
  x.dp.z() = rng.uniform(0.3, 1.8); // follower below the leader
  return x;
}

} // namespace

bool check_equivariance(std::ostream& os, int cases, double tol) {
  Prng rng(20240614u);
  MlpModel model = MlpModel::init({6, 32, 32, 3}, 7u);

  double worst_h = 0, worst_pred = 0, worst_phi = 0;
  for (int c = 0; c < cases; ++c) {
    const RelativeState9 x = random_state(rng);
    const double theta = rng.uniform(-kPi, kPi);
    const RelativeState9 xr = rotate_state(x, theta);

    const Features f = feature_map(x);
    const Features fr = feature_map(xr);
    worst_h = std::max(worst_h, (f.h - fr.h).cwiseAbs().maxCoeff());

    if (f.h[1] > kDegenerateNorm) {
      const double shift = std::abs(wrap_angle(fr.phi - f.phi - theta));
      worst_phi = std::max(worst_phi, shift);
    }

    const Vec3 p = predict(model, x);
    const Vec3 pr = predict(model, xr);
    worst_pred = std::max(worst_pred, (pr - rot_z(theta) * p).cwiseAbs().maxCoeff());
  }

  const bool ok = worst_h < tol && worst_pred < tol && worst_phi < tol;
  os << (ok ? "[PASS]" : "[FAIL]") << " equivariance: max |h(rot x)-h(x)|=" << worst_h
     << ", max |predict(rot x)-Rot predict(x)|=" << worst_pred
     << ", max phi shift error=" << worst_phi << " (tol " << tol << ", " << cases
     << " cases)\n";
  return ok;
}

bool check_care(std::ostream& os, double tol) {
  const LinearModel mdl = linear_model(0.7);
  const LqrWeights w; // defaults
  const GainMatrix closed_form = solve_lqr(w, mdl);

  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(7, 7);
  Q.diagonal() << w.q_p, w.q_v, w.q_psi;
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(4, 4);
  R.diagonal() << w.r_a, w.r_psi;

  // Any stabilizing seed works; Newton converges to the unique solution.
  Eigen::MatrixXd K0 = Eigen::MatrixXd::Zero(4, 7);
  for (int i = 0; i < 3; ++i) {
    K0(i, i) = 1.0;
    K0(i, 3 + i) = 2.0;
  }
  K0(3, 6) = 1.0;

  const Eigen::MatrixXd P = solve_care_kleinman(mdl.A, mdl.B, Q, R, K0);
  const Eigen::MatrixXd K_iter = R.inverse() * mdl.B.transpose() * P;

  const double gain_diff = (K_iter - closed_form.K).cwiseAbs().maxCoeff();
  const double resid = care_residual(mdl.A, mdl.B, Q, R, P);

  const Eigen::MatrixXd Acl = mdl.A - mdl.B * closed_form.K;
  const Eigen::EigenSolver<Eigen::MatrixXd> es(Acl);
  const double max_re = es.eigenvalues().real().maxCoeff();

  const bool ok = gain_diff < tol && resid < 1e-8 && max_re < 0;
  os << (ok ? "[PASS]" : "[FAIL]") << " care: |K_closed - K_newton|=" << gain_diff
     << " (tol " << tol << "), riccati residual=" << resid
     << " (tol 1e-8), max closed-loop Re(eig)=" << max_re << "\n";
  return ok;
}

bool check_gradients(std::ostream& os, int draws, double tol) {
  Prng rng(99u);
  double worst = 0;
  for (int d = 0; d < draws; ++d) {
    MlpModel m = MlpModel::init({6, 32, 32, 3}, 1000u + d);
    const int batch = 8;
    Eigen::MatrixXd X(6, batch), T(3, batch);
    for (int j = 0; j < batch; ++j) {
      for (int i = 0; i < 6; ++i) X(i, j) = rng.uniform(-1.5, 1.5);
      for (int i = 0; i < 3; ++i) T(i, j) = rng.uniform(-5, 5);
    }
    MlpGradients grads;
    loss_and_gradient(m, X, T, &grads);
    const Eigen::VectorXd g = flatten_grads(grads);
    Eigen::VectorXd theta = flatten_params(m);

    // Central differences on a random subset of coordinates.
    const double h = 1e-6;
    for (int probe = 0; probe < 25; ++probe) {
      const long idx = static_cast<long>(rng.next_u64() % static_cast<uint64_t>(theta.size()));
      Eigen::VectorXd tp = theta, tm = theta;
      tp[idx] += h;
      tm[idx] -= h;
      MlpModel mp = m, mm = m;
      unflatten_params(tp, &mp);
      unflatten_params(tm, &mm);
      const double fd = (loss_only(mp, X, T) - loss_only(mm, X, T)) / (2 * h);
      const double rel = std::abs(fd - g[idx]) / std::max(1e-8, std::abs(fd) + std::abs(g[idx]));
      worst = std::max(worst, rel);
    }
  }
  const bool ok = worst < tol;
  os << (ok ? "[PASS]" : "[FAIL]") << " gradients: max relative error=" << worst
     << " (tol " << tol << ", " << draws << " draws)\n";
  return ok;
}

bool run_property_checks(std::ostream& os) {
  bool ok = true;
  ok &= check_equivariance(os);
  ok &= check_care(os);
  ok &= check_gradients(os);
  return ok;
}

} // namespace docksim
