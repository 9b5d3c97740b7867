#pragma once

#include <string>
#include <vector>

#include "docksim/common.hpp"
#include "docksim/features.hpp"

namespace docksim {

// Small fully-connected net with tanh hidden layers, trained by hand-rolled
// backprop. It regresses the downwash force in the canonical frame where
// proj(dp) lies on the leader's +a1 axis; predict() rotates the output back
// by phi, which makes the predictor SO(2)-equivariant by construction.
class MlpModel {
 public:
  std::vector<Eigen::MatrixXd> W; // W[l]: sizes[l+1] x sizes[l]
  std::vector<Eigen::VectorXd> b;
  double f_max = 12.0;            // output magnitude clamp, m/s^2
  std::string meta;               // free-form training metadata

  static MlpModel init(const std::vector<int>& sizes, uint64_t seed,
                       double f_max = 12.0);

  const std::vector<int>& sizes() const { return sizes_; }
  int num_layers() const { return static_cast<int>(W.size()); }
  bool empty() const { return W.empty(); }

  // Batched forward pass; columns are samples.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& X) const;
  Vec3 forward_one(const Vec6& h) const;

  void save(const std::string& path) const;
  static MlpModel load(const std::string& path);

  // Set by init/load; kept in sync with W/b shapes.
  std::vector<int> sizes_;
};

// Gradient container matching a model's parameter shapes.
struct MlpGradients {
  std::vector<Eigen::MatrixXd> dW;
  std::vector<Eigen::VectorXd> db;
};

// Mean-squared-error loss over the batch (mean over columns of the squared
// residual norm) and its analytic gradient.
double loss_and_gradient(const MlpModel& model, const Eigen::MatrixXd& X,
                         const Eigen::MatrixXd& T, MlpGradients* grads);

double loss_only(const MlpModel& model, const Eigen::MatrixXd& X,
                 const Eigen::MatrixXd& T);

// Inertial-frame force prediction for a relative state.
Vec3 predict(const MlpModel& model, const RelativeState9& x9,
             const Mat3& R_EA = Mat3::Identity());

// Flat parameter views used by the finite-difference gradient check.
Eigen::VectorXd flatten_params(const MlpModel& model);
void unflatten_params(const Eigen::VectorXd& theta, MlpModel* model);
Eigen::VectorXd flatten_grads(const MlpGradients& grads);

} // namespace docksim
