#include "docksim/mlp.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "docksim/rng.hpp"

namespace docksim {

MlpModel MlpModel::init(const std::vector<int>& sizes, uint64_t seed, double f_max) {
  if (sizes.size() < 2) throw InvalidParameter("MlpModel::init: need at least two layer sizes");
  MlpModel m;
  m.sizes_ = sizes;
  m.f_max = f_max;
  Prng rng(seed);
  for (size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int in = sizes[l], out = sizes[l + 1];
    const double limit = std::sqrt(6.0 / (in + out)); // Xavier uniform
    Eigen::MatrixXd Wl(out, in);
    for (int i = 0; i < out; ++i)
      for (int j = 0; j < in; ++j)
        Wl(i, j) = rng.uniform(-limit, limit);
    m.W.push_back(std::move(Wl));
    m.b.push_back(Eigen::VectorXd::Zero(out));
  }
  return m;
}

Eigen::MatrixXd MlpModel::forward(const Eigen::MatrixXd& X) const {
  Eigen::MatrixXd a = X;
  for (int l = 0; l < num_layers(); ++l) {
    a = (W[l] * a).colwise() + b[l];
    if (l + 1 < num_layers()) a = a.array().tanh();
  }
  return a;
}

Vec3 MlpModel::forward_one(const Vec6& h) const {
  const Eigen::MatrixXd y = forward(h);
  return Vec3(y(0, 0), y(1, 0), y(2, 0));
}

double loss_and_gradient(const MlpModel& model, const Eigen::MatrixXd& X,
                         const Eigen::MatrixXd& T, MlpGradients* grads) {
  const int L = model.num_layers();
  const double n = static_cast<double>(X.cols());

  std::vector<Eigen::MatrixXd> acts(L + 1);
  acts[0] = X;
  for (int l = 0; l < L; ++l) {
    acts[l + 1] = (model.W[l] * acts[l]).colwise() + model.b[l];
    if (l + 1 < L) acts[l + 1] = acts[l + 1].array().tanh();
  }

  const Eigen::MatrixXd resid = acts[L] - T;
  const double loss = resid.squaredNorm() / n;

  if (grads) {
    grads->dW.assign(L, {});
    grads->db.assign(L, {});
    Eigen::MatrixXd delta = 2.0 * resid / n;
    for (int l = L - 1; l >= 0; --l) {
      grads->dW[l] = delta * acts[l].transpose();
      grads->db[l] = delta.rowwise().sum();
      if (l > 0) {
        delta = model.W[l].transpose() * delta;
        delta.array() *= 1.0 - acts[l].array().square(); // tanh'
      }
    }
  }
  return loss;
}

double loss_only(const MlpModel& model, const Eigen::MatrixXd& X,
                 const Eigen::MatrixXd& T) {
  return (model.forward(X) - T).squaredNorm() / static_cast<double>(X.cols());
}

Vec3 predict(const MlpModel& model, const RelativeState9& x9, const Mat3& R_EA) {
  const Features f = feature_map(x9, R_EA);
  Vec3 g = model.forward_one(f.h);
  const double norm = g.norm();
  if (norm > model.f_max) g *= model.f_max / norm;
  // Canonical frame -> leader frame (rotate by phi) -> inertial frame.
  return R_EA.transpose() * (rot_z(f.phi) * g);
}

Eigen::VectorXd flatten_params(const MlpModel& model) {
  long total = 0;
  for (int l = 0; l < model.num_layers(); ++l)
    total += model.W[l].size() + model.b[l].size();
  Eigen::VectorXd theta(total);
  long k = 0;
  for (int l = 0; l < model.num_layers(); ++l) {
    theta.segment(k, model.W[l].size()) =
        Eigen::Map<const Eigen::VectorXd>(model.W[l].data(), model.W[l].size());
    k += model.W[l].size();
    theta.segment(k, model.b[l].size()) = model.b[l];
    k += model.b[l].size();
  }
  return theta;
}

void unflatten_params(const Eigen::VectorXd& theta, MlpModel* model) {
  long k = 0;
  for (int l = 0; l < model->num_layers(); ++l) {
    Eigen::Map<Eigen::VectorXd>(model->W[l].data(), model->W[l].size()) =
        theta.segment(k, model->W[l].size());
    k += model->W[l].size();
    model->b[l] = theta.segment(k, model->b[l].size());
    k += model->b[l].size();
  }
}

Eigen::VectorXd flatten_grads(const MlpGradients& grads) {
  long total = 0;
  for (size_t l = 0; l < grads.dW.size(); ++l)
    total += grads.dW[l].size() + grads.db[l].size();
  Eigen::VectorXd g(total);
  long k = 0;
  for (size_t l = 0; l < grads.dW.size(); ++l) {
    g.segment(k, grads.dW[l].size()) =
        Eigen::Map<const Eigen::VectorXd>(grads.dW[l].data(), grads.dW[l].size());
    k += grads.dW[l].size();
    g.segment(k, grads.db[l].size()) = grads.db[l];
    k += grads.db[l].size();
  }
  return g;
}

namespace {
constexpr const char* kFormatTag = "docksim-mlp v1";

void write_matrix(std::ostream& os, const Eigen::MatrixXd& M) {
  char buf[32];
  for (long i = 0; i < M.rows(); ++i) {
    for (long j = 0; j < M.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", M(i, j));
      os << buf << (j + 1 < M.cols() ? " " : "");
    }
    os << "\n";
  }
}
} // namespace

void MlpModel::save(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw SimulationFault("MlpModel::save: cannot open " + path);
  os << kFormatTag << "\n";
  os << "layers";
  for (int s : sizes_) os << " " << s;
  os << "\n";
  os << "activation tanh\n";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", f_max);
  os << "f_max " << buf << "\n";
  os << "meta " << (meta.empty() ? "-" : meta) << "\n";
  for (int l = 0; l < num_layers(); ++l) {
    os << "W" << l << " " << W[l].rows() << " " << W[l].cols() << "\n";
    write_matrix(os, W[l]);
    os << "b" << l << " " << b[l].size() << "\n";
    write_matrix(os, b[l]);
  }
  if (!os) throw SimulationFault("MlpModel::save: write failed for " + path);
}

MlpModel MlpModel::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw SimulationFault("MlpModel::load: cannot open " + path);
  std::string line;
  std::getline(is, line);
  if (line != kFormatTag)
    throw SimulationFault("MlpModel::load: unsupported model format in " + path +
                          " (expected '" + kFormatTag + "')");
  MlpModel m;
  std::getline(is, line);
  {
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key != "layers") throw SimulationFault("MlpModel::load: missing layer sizes");
    int s;
    while (ss >> s) m.sizes_.push_back(s);
    if (m.sizes_.size() < 2) throw SimulationFault("MlpModel::load: bad layer sizes");
  }
  std::getline(is, line);
  if (line != "activation tanh")
    throw SimulationFault("MlpModel::load: unsupported activation in " + path);
  std::getline(is, line);
  {
    std::istringstream ss(line);
    std::string key;
    ss >> key >> m.f_max;
    if (key != "f_max") throw SimulationFault("MlpModel::load: missing f_max");
  }
  std::getline(is, line);
  if (line.rfind("meta ", 0) != 0) throw SimulationFault("MlpModel::load: missing meta");
  m.meta = line.substr(5);
  if (m.meta == "-") m.meta.clear();

  for (size_t l = 0; l + 1 < m.sizes_.size(); ++l) {
    std::string tag;
    long rows, cols;
    is >> tag >> rows >> cols;
    if (tag != "W" + std::to_string(l) || rows != m.sizes_[l + 1] || cols != m.sizes_[l])
      throw SimulationFault("MlpModel::load: weight block mismatch in " + path);
    Eigen::MatrixXd Wl(rows, cols);
    for (long i = 0; i < rows; ++i)
      for (long j = 0; j < cols; ++j) is >> Wl(i, j);
    m.W.push_back(std::move(Wl));
    long blen;
    is >> tag >> blen;
    if (tag != "b" + std::to_string(l) || blen != m.sizes_[l + 1])
      throw SimulationFault("MlpModel::load: bias block mismatch in " + path);
    Eigen::VectorXd bl(blen);
    for (long i = 0; i < blen; ++i) is >> bl(i);
    m.b.push_back(std::move(bl));
  }
  if (!is) throw SimulationFault("MlpModel::load: truncated model file " + path);
  return m;
}

} // namespace docksim
