#pragma once

#include <string>
#include <vector>

#include "docksim/control.hpp"
#include "docksim/features.hpp"
#include "docksim/mlp.hpp"

namespace docksim {

// One residual-labeled data point for the downwash learner.
struct TrainingSample {
  RelativeState9 x9;
  Vec3 label = Vec3::Zero(); // estimated f_ext, m/s^2, inertial frame
  int stage = 0;             // curriculum stage id
  double t = 0.0;            // collection timestamp, s
};

// Residual label: observed minus commanded acceleration, bias-corrected.
Vec3 make_label(const Vec3& a_obs, const ControlInput& u_cmd, const Vec3& bias);

// Constant-bias estimate: mean residual over a disturbance-free segment.
Vec3 estimate_bias(const std::vector<Vec3>& a_obs,
                   const std::vector<ControlInput>& u_cmd);

struct TrainHyper {
  int epochs = 2000;
  int batch = 256;
  double step_size = 1e-3;
  uint64_t seed = 1;
  std::vector<int> layers = {6, 32, 32, 3};
  double f_max = 12.0;
};

struct TrainOutput {
  MlpModel model;
  std::vector<double> train_loss; // per epoch
  std::vector<double> val_loss;   // per epoch (empty if no validation rows)
};

// Splits by contiguous time blocks within each stage: first 80% of every
// stage's rows train, the rest validate. Avoids temporal leakage.
void split_time_blocks(const std::vector<TrainingSample>& samples,
                       std::vector<TrainingSample>* train_rows,
                       std::vector<TrainingSample>* val_rows,
                       double train_fraction = 0.8);

// Canonical-frame regression targets and features for a sample set.
void build_design_matrices(const std::vector<TrainingSample>& samples,
                           Eigen::MatrixXd* H, Eigen::MatrixXd* T);

// Mini-batch Adam on the MSE objective. Deterministic given hyper.seed.
TrainOutput train(const std::vector<TrainingSample>& samples, const TrainHyper& hyper);

// Root-mean-square prediction error (inertial frame) over a sample set.
double rmse(const MlpModel& model, const std::vector<TrainingSample>& samples);

// Dataset CSV: one row per sample, 9 state values + 3 label values +
// stage id + timestamp, with a header line.
void save_dataset_csv(const std::string& path, const std::vector<TrainingSample>& samples);
std::vector<TrainingSample> load_dataset_csv(const std::string& path);
std::vector<TrainingSample> load_dataset_dir(const std::string& dir);

} // namespace docksim
