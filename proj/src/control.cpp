#include "docksim/control.hpp"

#include <Eigen/Eigenvalues>

namespace docksim {

void LqrWeights::validate() const {
  if (!(q_p.minCoeff() > 0 && q_v.minCoeff() > 0 && q_psi > 0 &&
        r_a.minCoeff() > 0 && r_psi > 0))
    throw InvalidParameter("LqrWeights: all weights must be strictly positive");
}

GainMatrix solve_lqr(const LqrWeights& weights, const LinearModel& model) {
  weights.validate();
  (void)model; // the Eq-structure model is fixed; weights fully determine K
  GainMatrix g;
  for (int i = 0; i < 3; ++i) {
    const double kp = std::sqrt(weights.q_p[i] / weights.r_a[i]);
    const double kv = std::sqrt(weights.q_v[i] / weights.r_a[i] + 2.0 * kp);
    g.K(i, i) = kp;
    g.K(i, 3 + i) = kv;
  }
  g.K(3, 6) = std::sqrt(weights.q_psi / weights.r_psi);
  return g;
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& S) {
  const int n = static_cast<int>(A.rows());
  // vec(A^T P + P A) = (I (x) A^T + A^T (x) I) vec(P)
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n * n, n * n);
  const Eigen::MatrixXd At = A.transpose();
  for (int i = 0; i < n; ++i)
    M.block(i * n, i * n, n, n) += At;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      M.block(j * n, i * n, n, n).diagonal().array() += At(j, i);
  Eigen::VectorXd rhs(n * n);
  for (int c = 0; c < n; ++c) rhs.segment(c * n, n) = -S.col(c);
  const Eigen::VectorXd sol = M.fullPivLu().solve(rhs);
  Eigen::MatrixXd P(n, n);
  for (int c = 0; c < n; ++c) P.col(c) = sol.segment(c * n, n);
  return 0.5 * (P + P.transpose());
}

Eigen::MatrixXd solve_care_kleinman(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                    const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                                    const Eigen::MatrixXd& K0, int max_iter, double tol) {
  Eigen::MatrixXd K = K0;
  Eigen::MatrixXd P;
  const Eigen::MatrixXd Rinv = R.inverse();
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::MatrixXd Acl = A - B * K;
    const Eigen::MatrixXd S = Q + K.transpose() * R * K;
    P = solve_lyapunov(Acl, S);
    const Eigen::MatrixXd Knew = Rinv * B.transpose() * P;
    const double delta = (Knew - K).cwiseAbs().maxCoeff();
    K = Knew;
    if (delta < tol) break;
  }
  return P;
}

double care_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                     const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                     const Eigen::MatrixXd& P) {
  const Eigen::MatrixXd res =
      A.transpose() * P + P * A - P * B * R.inverse() * B.transpose() * P + Q;
  return res.cwiseAbs().maxCoeff();
}

ControlInput feedback(const Vec7& x, const Vec7& x_ref, const Vec3& a_ff,
                      const GainMatrix& gains) {
  Vec7 e = x - x_ref;
  e[6] = wrap_angle(e[6]);
  const Vec4 u_raw = -gains.K * e;
  ControlInput u;
  u.a = u_raw.head<3>() + a_ff;
  u.psi_dot = u_raw[3];
  for (int i = 0; i < 3; ++i)
    u.a[i] = std::clamp(u.a[i], -kAccelMax, kAccelMax);
  return u;
}

ControlInput compensate(const ControlInput& u, const Vec3& f_pred) {
  ControlInput out = u;
  out.a -= f_pred;
  for (int i = 0; i < 3; ++i)
    out.a[i] = std::clamp(out.a[i], -kAccelMax, kAccelMax);
  return out;
}

ObserverState observer_update(const ObserverState& obs, const Vec7& x_meas,
                              const ControlInput& u_applied, double dt) {
  if (!(dt > 0.0)) throw InvalidParameter("observer_update: dt must be positive");
  ObserverState out = obs;
  if (!obs.initialized) {
    out.x_hat = x_meas;
    out.f_hat.setZero();
    out.initialized = true;
    return out;
  }
  const double lv = 2.0 * obs.gains.omega;
  const double lf = obs.gains.omega * obs.gains.omega;
  const Vec3 p_meas = x_meas.head<3>();
  const Vec3 v_meas = x_meas.segment<3>(3);
  const Vec3 ep = p_meas - obs.x_hat.head<3>();
  const Vec3 ev = v_meas - obs.x_hat.segment<3>(3);
  const double epsi = wrap_angle(x_meas[6] - obs.x_hat[6]);

  out.x_hat.head<3>() += dt * (obs.x_hat.segment<3>(3) + obs.gains.l_p * ep);
  out.x_hat.segment<3>(3) += dt * (u_applied.a + obs.f_hat + lv * ev);
  out.x_hat[6] = wrap_angle(obs.x_hat[6] + dt * (u_applied.psi_dot + obs.gains.l_p * epsi));
  out.f_hat += dt * lf * ev;
  return out;
}

} // namespace docksim
