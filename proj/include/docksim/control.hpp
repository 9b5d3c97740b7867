#pragma once

#include "docksim/common.hpp"
#include "docksim/vehicle.hpp"

namespace docksim {

// Diagonal LQR weights for the decoupled model: three double-integrator
// position axes plus a single-integrator yaw axis.
struct LqrWeights {
  Vec3 q_p = Vec3(64, 64, 64);
  Vec3 q_v = Vec3(16, 16, 16);
  double q_psi = 2.0;
  Vec3 r_a = Vec3(1, 1, 1);
  double r_psi = 1.0;

  void validate() const;
};

struct GainMatrix {
  Eigen::Matrix<double, 4, 7> K = Eigen::Matrix<double, 4, 7>::Zero();
};

// Acceleration + yaw-rate command, the feedback-level control input.
struct ControlInput {
  Vec3 a = Vec3::Zero();  // m/s^2
  double psi_dot = 0.0;   // rad/s
};

inline constexpr double kAccelMax = 8.0; // per-axis command saturation, m/s^2

// Infinite-horizon LQR gain via the per-axis closed-form CARE solution:
// k_p = sqrt(q_p/r), k_v = sqrt(q_v/r + 2 sqrt(q_p/r)), k_psi = sqrt(q/r).
GainMatrix solve_lqr(const LqrWeights& weights, const LinearModel& model);

// Dense CARE via Kleinman-Newton iteration (Lyapunov solves on the closed
// loop). Cross-check oracle for the closed-form path; returns P.
Eigen::MatrixXd solve_care_kleinman(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                    const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                                    const Eigen::MatrixXd& K0, int max_iter = 60,
                                    double tol = 1e-13);

// Solves A^T P + P A = -S for P (A must be Hurwitz).
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& S);

// Riccati residual |A^T P + P A - P B R^-1 B^T P + Q|_max.
double care_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                     const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                     const Eigen::MatrixXd& P);

// Tracking feedback u = -K (x - x_ref) + [a_ff; 0], with per-axis
// acceleration saturation.
ControlInput feedback(const Vec7& x, const Vec7& x_ref, const Vec3& a_ff,
                      const GainMatrix& gains);

// Subtracts a predicted disturbance from the acceleration command.
ControlInput compensate(const ControlInput& u, const Vec3& f_pred);

// Fixed-gain disturbance observer on the augmented state [x; f_ext] with a
// random-walk disturbance model. Gains place the (v, f) error poles at
// -omega (double) per axis; 95% convergence to a step disturbance takes
// about 4.75/omega seconds.
struct ObserverGains {
  double l_p = 5.0;     // position estimate correction
  double omega = 4.7;   // disturbance channel natural frequency, rad/s
};

struct ObserverState {
  Vec7 x_hat = Vec7::Zero();
  Vec3 f_hat = Vec3::Zero();
  ObserverGains gains;
  bool initialized = false;
};

ObserverState observer_update(const ObserverState& obs, const Vec7& x_meas,
                              const ControlInput& u_applied, double dt);

} // namespace docksim
