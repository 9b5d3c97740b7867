#include "docksim/training.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "docksim/rng.hpp"

namespace docksim {

Vec3 make_label(const Vec3& a_obs, const ControlInput& u_cmd, const Vec3& bias) {
  return a_obs - u_cmd.a - bias;
}

Vec3 estimate_bias(const std::vector<Vec3>& a_obs,
                   const std::vector<ControlInput>& u_cmd) {
  if (a_obs.empty() || a_obs.size() != u_cmd.size())
    throw InvalidParameter("estimate_bias: need matching non-empty segments");
  Vec3 sum = Vec3::Zero();
  for (size_t i = 0; i < a_obs.size(); ++i) sum += a_obs[i] - u_cmd[i].a;
  return sum / static_cast<double>(a_obs.size());
}

void split_time_blocks(const std::vector<TrainingSample>& samples,
                       std::vector<TrainingSample>* train_rows,
                       std::vector<TrainingSample>* val_rows,
                       double train_fraction) {
  train_rows->clear();
  val_rows->clear();
  std::map<int, std::vector<TrainingSample>> by_stage;
  for (const auto& s : samples) by_stage[s.stage].push_back(s);
  for (auto& [stage, rows] : by_stage) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const TrainingSample& a, const TrainingSample& b) { return a.t < b.t; });
    const size_t n_train = static_cast<size_t>(rows.size() * train_fraction);
    for (size_t i = 0; i < rows.size(); ++i)
      (i < n_train ? train_rows : val_rows)->push_back(rows[i]);
  }
}

void build_design_matrices(const std::vector<TrainingSample>& samples,
                           Eigen::MatrixXd* H, Eigen::MatrixXd* T) {
  const long n = static_cast<long>(samples.size());
  H->resize(6, n);
  T->resize(3, n);
  for (long i = 0; i < n; ++i) {
    const Features f = feature_map(samples[i].x9);
    H->col(i) = f.h;
    // Regress in the canonical frame so one pass of data teaches every azimuth.
    T->col(i) = rot_z(-f.phi) * samples[i].label;
  }
}

TrainOutput train(const std::vector<TrainingSample>& samples, const TrainHyper& hyper) {
  if (samples.empty()) throw InvalidParameter("train: empty dataset");
  if (hyper.epochs < 1 || hyper.batch < 1 || !(hyper.step_size > 0))
    throw InvalidParameter("train: bad hyperparameters");

  std::vector<TrainingSample> train_rows, val_rows;
  split_time_blocks(samples, &train_rows, &val_rows);
  if (train_rows.empty()) train_rows = samples;

  Eigen::MatrixXd H, T, Hv, Tv;
  build_design_matrices(train_rows, &H, &T);
  const bool has_val = !val_rows.empty();
  if (has_val) build_design_matrices(val_rows, &Hv, &Tv);

  TrainOutput out;
  out.model = MlpModel::init(hyper.layers, hyper.seed, hyper.f_max);
  MlpModel& m = out.model;

  // Adam moments per parameter block.
  const int L = m.num_layers();
  std::vector<Eigen::MatrixXd> mW(L), vW(L);
  std::vector<Eigen::VectorXd> mb(L), vb(L);
  for (int l = 0; l < L; ++l) {
    mW[l] = Eigen::MatrixXd::Zero(m.W[l].rows(), m.W[l].cols());
    vW[l] = mW[l];
    mb[l] = Eigen::VectorXd::Zero(m.b[l].size());
    vb[l] = mb[l];
  }
  const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  long adam_t = 0;

  const long n = H.cols();
  std::vector<long> order(n);
  std::iota(order.begin(), order.end(), 0L);
  Prng shuffle_rng(Prng::mix(hyper.seed, 0x5u));

  MlpGradients grads;
  Eigen::MatrixXd Hb, Tb;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    // Fisher-Yates with the deterministic stream.
    for (long i = n - 1; i > 0; --i) {
      const long j = static_cast<long>(shuffle_rng.next_u64() % static_cast<uint64_t>(i + 1));
      std::swap(order[i], order[j]);
    }
    double epoch_loss = 0;
    long batches = 0;
    for (long start = 0; start < n; start += hyper.batch) {
      const long bsz = std::min<long>(hyper.batch, n - start);
      Hb.resize(6, bsz);
      Tb.resize(3, bsz);
      for (long k = 0; k < bsz; ++k) {
        Hb.col(k) = H.col(order[start + k]);
        Tb.col(k) = T.col(order[start + k]);
      }
      epoch_loss += loss_and_gradient(m, Hb, Tb, &grads);
      ++batches;
      ++adam_t;
      const double corr = hyper.step_size *
          std::sqrt(1.0 - std::pow(beta2, adam_t)) / (1.0 - std::pow(beta1, adam_t));
      for (int l = 0; l < L; ++l) {
        mW[l] = beta1 * mW[l] + (1 - beta1) * grads.dW[l];
        vW[l] = beta2 * vW[l].array() + (1 - beta2) * grads.dW[l].array().square();
        m.W[l].array() -= corr * mW[l].array() / (vW[l].array().sqrt() + eps);
        mb[l] = beta1 * mb[l] + (1 - beta1) * grads.db[l];
        vb[l] = beta2 * vb[l].array() + (1 - beta2) * grads.db[l].array().square();
        m.b[l].array() -= corr * mb[l].array() / (vb[l].array().sqrt() + eps);
      }
    }
    out.train_loss.push_back(epoch_loss / std::max<long>(batches, 1));
    if (has_val) out.val_loss.push_back(loss_only(m, Hv, Tv));
  }

  std::ostringstream meta;
  meta << "samples=" << samples.size() << " epochs=" << hyper.epochs
       << " batch=" << hyper.batch << " step=" << hyper.step_size
       << " seed=" << hyper.seed << " final_train_loss=" << out.train_loss.back();
  if (has_val) meta << " final_val_loss=" << out.val_loss.back();
  m.meta = meta.str();
  return out;
}

double rmse(const MlpModel& model, const std::vector<TrainingSample>& samples) {
  if (samples.empty()) return 0.0;
  double acc = 0;
  for (const auto& s : samples) acc += (predict(model, s.x9) - s.label).squaredNorm();
  return std::sqrt(acc / static_cast<double>(samples.size()));
}

void save_dataset_csv(const std::string& path, const std::vector<TrainingSample>& samples) {
  std::ofstream os(path);
  if (!os) throw SimulationFault("save_dataset_csv: cannot open " + path);
  os << "dp_n,dp_e,dp_d,va_n,va_e,va_d,vb_n,vb_e,vb_d,f_n,f_e,f_d,stage,t\n";
  char buf[32];
  auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf << sep;
  };
  for (const auto& s : samples) {
    for (int i = 0; i < 3; ++i) put(s.x9.dp[i], ',');
    for (int i = 0; i < 3; ++i) put(s.x9.v_leader[i], ',');
    for (int i = 0; i < 3; ++i) put(s.x9.v_follower[i], ',');
    for (int i = 0; i < 3; ++i) put(s.label[i], ',');
    os << s.stage << ",";
    put(s.t, '\n');
  }
  if (!os) throw SimulationFault("save_dataset_csv: write failed for " + path);
}

std::vector<TrainingSample> load_dataset_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw SimulationFault("load_dataset_csv: cannot open " + path);
  std::vector<TrainingSample> out;
  std::string line;
  std::getline(is, line); // header
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    double vals[14];
    char comma;
    for (int i = 0; i < 14; ++i) {
      if (!(ss >> vals[i])) throw SimulationFault("load_dataset_csv: bad row in " + path);
      if (i < 13) ss >> comma;
    }
    TrainingSample s;
    s.x9.dp = Vec3(vals[0], vals[1], vals[2]);
    s.x9.v_leader = Vec3(vals[3], vals[4], vals[5]);
    s.x9.v_follower = Vec3(vals[6], vals[7], vals[8]);
    s.label = Vec3(vals[9], vals[10], vals[11]);
    s.stage = static_cast<int>(vals[12]);
    s.t = vals[13];
    out.push_back(s);
  }
  return out;
}

std::vector<TrainingSample> load_dataset_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".csv")
      files.push_back(e.path().string());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InvalidParameter("load_dataset_dir: no .csv files in " + dir);
  std::vector<TrainingSample> all;
  for (const auto& f : files) {
    auto rows = load_dataset_csv(f);
    all.insert(all.end(), rows.begin(), rows.end());
  }
  return all;
}

} // namespace docksim
