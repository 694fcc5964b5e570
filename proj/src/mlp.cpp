#include "fatigue/mlp.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "fatigue/util.hpp"

namespace fatigue {

double selu(double x, double lambda, double alpha) {
  return x > 0 ? lambda * x : lambda * alpha * std::expm1(x);
}

double selu_prime(double x, double lambda, double alpha) {
  return x > 0 ? lambda : lambda * alpha * std::exp(x);
}

double selu_second(double x, double lambda, double alpha) {
  return x > 0 ? 0.0 : lambda * alpha * std::exp(x);
}

namespace {

// Derivative orders 1..3 of the activation at a pre-activation vector.
// For the exponential branch the second and third derivatives coincide.
void act_apply(const MlpParams& p, const Eigen::VectorXd& z, Eigen::VectorXd& a) {
  a.resize(z.size());
  if (p.activation == Activation::Identity) {
    a = z;
    return;
  }
  for (Eigen::Index i = 0; i < z.size(); ++i) a(i) = selu(z(i), p.selu_lambda, p.selu_alpha);
}

void act_derivs(const MlpParams& p, const Eigen::VectorXd& z, Eigen::VectorXd& d1,
                Eigen::VectorXd* d2, Eigen::VectorXd* d3) {
  d1.resize(z.size());
  if (d2) d2->resize(z.size());
  if (d3) d3->resize(z.size());
  if (p.activation == Activation::Identity) {
    d1.setOnes();
    if (d2) d2->setZero();
    if (d3) d3->setZero();
    return;
  }
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    double x = z(i);
    if (x > 0) {
      d1(i) = p.selu_lambda;
      if (d2) (*d2)(i) = 0.0;
      if (d3) (*d3)(i) = 0.0;
    } else {
      double e = p.selu_lambda * p.selu_alpha * std::exp(x);
      d1(i) = e;
      if (d2) (*d2)(i) = e;
      if (d3) (*d3)(i) = e;
    }
  }
}

}  // namespace

void MlpParams::validate() const {
  if (dims.size() < 2) throw Error("network needs at least input and output dims");
  for (int d : dims)
    if (d < 1) throw Error("layer widths must be positive");
  if (dims.back() != 1) throw Error("output layer width must be 1");
  if (W.size() != dims.size() - 1 || b.size() != W.size())
    throw Error("parameter count does not match dims");
  for (std::size_t l = 0; l < W.size(); ++l) {
    if (W[l].rows() != dims[l + 1] || W[l].cols() != dims[l])
      throw Error("weight shape mismatch at layer " + std::to_string(l));
    if (b[l].size() != dims[l + 1])
      throw Error("bias shape mismatch at layer " + std::to_string(l));
    if (!W[l].allFinite() || !b[l].allFinite())
      throw Error("non-finite parameters at layer " + std::to_string(l));
  }
}

MlpParams init_params(const std::vector<int>& dims, std::uint64_t seed) {
  MlpParams p;
  p.dims = dims;
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    std::normal_distribution<double> dist(0.0, std::sqrt(1.0 / dims[l]));
    Eigen::MatrixXd W(dims[l + 1], dims[l]);
    for (Eigen::Index r = 0; r < W.rows(); ++r)
      for (Eigen::Index c = 0; c < W.cols(); ++c) W(r, c) = dist(rng);
    p.W.push_back(std::move(W));
    p.b.push_back(Eigen::VectorXd::Zero(dims[l + 1]));
  }
  p.validate();
  return p;
}

double forward(const MlpParams& p, const Eigen::VectorXd& x) {
  if (x.size() != p.input_dim()) throw Error("input size does not match network input dim");
  const int L = p.layer_count();
  Eigen::VectorXd a = x, z;
  for (int l = 0; l < L; ++l) {
    z.noalias() = p.W[static_cast<std::size_t>(l)] * a;
    z += p.b[static_cast<std::size_t>(l)];
    if (l + 1 < L)
      act_apply(p, z, a);
    else
      a = z;
  }
  return a(0);
}

Eigen::VectorXd forward_batch(const MlpParams& p, const Eigen::MatrixXd& X) {
  Eigen::VectorXd out(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) out(i) = forward(p, X.row(i).transpose());
  return out;
}

Eigen::VectorXd input_gradient(const MlpParams& p, const Eigen::VectorXd& x) {
  if (x.size() != p.input_dim()) throw Error("input size does not match network input dim");
  const int L = p.layer_count();
  std::vector<Eigen::VectorXd> z(static_cast<std::size_t>(L));
  Eigen::VectorXd a = x;
  for (int l = 0; l < L; ++l) {
    z[static_cast<std::size_t>(l)].noalias() = p.W[static_cast<std::size_t>(l)] * a;
    z[static_cast<std::size_t>(l)] += p.b[static_cast<std::size_t>(l)];
    if (l + 1 < L) act_apply(p, z[static_cast<std::size_t>(l)], a);
  }
  Eigen::VectorXd v = p.W[static_cast<std::size_t>(L - 1)].row(0).transpose();
  Eigen::VectorXd d1;
  for (int l = L - 2; l >= 0; --l) {
    act_derivs(p, z[static_cast<std::size_t>(l)], d1, nullptr, nullptr);
    v = d1.cwiseProduct(v);
    v = p.W[static_cast<std::size_t>(l)].transpose() * v;
  }
  return v;
}

double input_second_diagonal(const MlpParams& p, const Eigen::VectorXd& x, int i) {
  if (i < 0 || i >= p.input_dim()) throw Error("input column out of range");
  return extended_forward(p, x, {i}, i).second();
}

ForwardTrace extended_forward(const MlpParams& p, const Eigen::VectorXd& x,
                              const std::vector<int>& cols, int curv_col) {
  if (x.size() != p.input_dim()) throw Error("input size does not match network input dim");
  const int L = p.layer_count();
  const std::size_t K = cols.size();

  ForwardTrace t;
  t.x = x;
  t.cols = cols;
  t.z.resize(static_cast<std::size_t>(L));
  t.a.resize(static_cast<std::size_t>(L));
  t.s.assign(K, std::vector<Eigen::VectorXd>(static_cast<std::size_t>(L)));
  t.u.assign(K, std::vector<Eigen::VectorXd>(static_cast<std::size_t>(L)));
  if (curv_col >= 0) {
    for (std::size_t k = 0; k < K; ++k)
      if (cols[k] == curv_col) t.curv_pos = static_cast<int>(k);
    if (t.curv_pos < 0) throw Error("curvature column must be among tracked columns");
    t.r.resize(static_cast<std::size_t>(L));
    t.c.resize(static_cast<std::size_t>(L));
  }

  Eigen::VectorXd a_prev = x;
  std::vector<Eigen::VectorXd> u_prev(K);
  for (std::size_t k = 0; k < K; ++k) {
    if (cols[k] < 0 || cols[k] >= p.input_dim()) throw Error("tracked column out of range");
    u_prev[k] = Eigen::VectorXd::Zero(x.size());
    u_prev[k](cols[k]) = 1.0;
  }
  Eigen::VectorXd c_prev = Eigen::VectorXd::Zero(x.size());

  Eigen::VectorXd d1, d2;
  for (int l = 0; l < L; ++l) {
    const auto li = static_cast<std::size_t>(l);
    t.z[li].noalias() = p.W[li] * a_prev;
    t.z[li] += p.b[li];
    if (!t.z[li].allFinite()) throw Error("non-finite pre-activation at layer " + std::to_string(l));
    for (std::size_t k = 0; k < K; ++k) t.s[k][li].noalias() = p.W[li] * u_prev[k];
    if (t.curv_pos >= 0) t.r[li].noalias() = p.W[li] * c_prev;

    if (l + 1 < L) {
      act_apply(p, t.z[li], t.a[li]);
      act_derivs(p, t.z[li], d1, &d2, nullptr);
      for (std::size_t k = 0; k < K; ++k) t.u[k][li] = d1.cwiseProduct(t.s[k][li]);
      if (t.curv_pos >= 0) {
        const Eigen::VectorXd& se = t.s[static_cast<std::size_t>(t.curv_pos)][li];
        t.c[li] = d2.cwiseProduct(se.cwiseProduct(se)) + d1.cwiseProduct(t.r[li]);
      }
    } else {
      t.a[li] = t.z[li];
      for (std::size_t k = 0; k < K; ++k) t.u[k][li] = t.s[k][li];
      if (t.curv_pos >= 0) t.c[li] = t.r[li];
    }

    a_prev = t.a[li];
    for (std::size_t k = 0; k < K; ++k) u_prev[k] = t.u[k][li];
    if (t.curv_pos >= 0) c_prev = t.c[li];
  }
  return t;
}

ParamGrads ParamGrads::zeros_like(const MlpParams& p) {
  ParamGrads g;
  for (std::size_t l = 0; l < p.W.size(); ++l) {
    g.W.push_back(Eigen::MatrixXd::Zero(p.W[l].rows(), p.W[l].cols()));
    g.b.push_back(Eigen::VectorXd::Zero(p.b[l].size()));
  }
  return g;
}

double ParamGrads::global_norm() const {
  double ss = 0.0;
  for (const auto& w : W) ss += w.squaredNorm();
  for (const auto& v : b) ss += v.squaredNorm();
  return std::sqrt(ss);
}

void ParamGrads::scale(double s) {
  for (auto& w : W) w *= s;
  for (auto& v : b) v *= s;
}

void extended_backward(const MlpParams& p, const ForwardTrace& t, double ybar,
                       const std::vector<double>& gbar, double hbar, ParamGrads& grads) {
  const int L = p.layer_count();
  const std::size_t K = t.cols.size();
  if (gbar.size() != K) throw Error("adjoint count does not match tracked columns");
  const bool curv = t.curv_pos >= 0;
  if (hbar != 0.0 && !curv) throw Error("second-derivative adjoint without curvature trace");

  Eigen::VectorXd zbar = Eigen::VectorXd::Zero(p.dims.back());
  zbar(0) = ybar;
  std::vector<Eigen::VectorXd> sbar(K);
  for (std::size_t k = 0; k < K; ++k) {
    sbar[k] = Eigen::VectorXd::Zero(p.dims.back());
    sbar[k](0) = gbar[k];
  }
  Eigen::VectorXd rbar;
  if (curv) {
    rbar = Eigen::VectorXd::Zero(p.dims.back());
    rbar(0) = hbar;
  }

  Eigen::VectorXd d1, d2, d3;
  for (int l = L - 1; l >= 0; --l) {
    const auto li = static_cast<std::size_t>(l);
    const Eigen::VectorXd& prev_a = l == 0 ? t.x : t.a[li - 1];
    grads.W[li].noalias() += zbar * prev_a.transpose();
    grads.b[li] += zbar;
    if (l == 0) {
      for (std::size_t k = 0; k < K; ++k) grads.W[0].col(t.cols[k]) += sbar[k];
      // curvature state entering layer 0 is zero, so rbar adds nothing here
      break;
    }
    for (std::size_t k = 0; k < K; ++k) grads.W[li].noalias() += sbar[k] * t.u[k][li - 1].transpose();
    if (curv) grads.W[li].noalias() += rbar * t.c[li - 1].transpose();

    Eigen::VectorXd abar = p.W[li].transpose() * zbar;
    std::vector<Eigen::VectorXd> ubar(K);
    for (std::size_t k = 0; k < K; ++k) ubar[k] = p.W[li].transpose() * sbar[k];
    Eigen::VectorXd cbar;
    if (curv) cbar = p.W[li].transpose() * rbar;

    // reverse through the activation of layer l-1
    const Eigen::VectorXd& z = t.z[li - 1];
    act_derivs(p, z, d1, &d2, curv ? &d3 : nullptr);
    zbar = abar.cwiseProduct(d1);
    for (std::size_t k = 0; k < K; ++k)
      zbar += ubar[k].cwiseProduct(d2).cwiseProduct(t.s[k][li - 1]);
    if (curv) {
      const Eigen::VectorXd& se = t.s[static_cast<std::size_t>(t.curv_pos)][li - 1];
      zbar += cbar.cwiseProduct(d3.cwiseProduct(se.cwiseProduct(se)) + d2.cwiseProduct(t.r[li - 1]));
    }
    for (std::size_t k = 0; k < K; ++k) sbar[k] = ubar[k].cwiseProduct(d1);
    if (curv) {
      const Eigen::VectorXd& se = t.s[static_cast<std::size_t>(t.curv_pos)][li - 1];
      sbar[static_cast<std::size_t>(t.curv_pos)] += 2.0 * cbar.cwiseProduct(d2).cwiseProduct(se);
      rbar = cbar.cwiseProduct(d1);
    }
  }
}

ParamGrads param_gradients(const MlpParams& p, const Eigen::MatrixXd& X,
                           const Eigen::VectorXd& loss_grad_per_sample) {
  if (X.rows() != loss_grad_per_sample.size())
    throw Error("batch size does not match per-sample adjoint count");
  ParamGrads g = ParamGrads::zeros_like(p);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    ForwardTrace t = extended_forward(p, X.row(i).transpose(), {}, -1);
    extended_backward(p, t, loss_grad_per_sample(i), {}, 0.0, g);
  }
  return g;
}

namespace {

const char* activation_name(Activation a) {
  return a == Activation::Selu ? "selu" : "identity";
}

Activation activation_from(const std::string& s) {
  if (s == "selu") return Activation::Selu;
  if (s == "identity") return Activation::Identity;
  throw Error("unknown activation '" + s + "'");
}

}  // namespace

void MlpParams::save(const std::string& path) const {
  validate();
  nlohmann::ordered_json doc;
  doc["kind"] = "model";
  doc["version"] = 1;
  doc["dims"] = dims;
  doc["activation"] = activation_name(activation);
  doc["selu_lambda"] = selu_lambda;
  doc["selu_alpha"] = selu_alpha;
  doc["schema_hash"] = to_hex(schema_hash);
  nlohmann::ordered_json layers = nlohmann::ordered_json::array();
  for (std::size_t l = 0; l < W.size(); ++l) {
    nlohmann::ordered_json layer;
    layer["rows"] = W[l].rows();
    layer["cols"] = W[l].cols();
    std::vector<double> weights;
    weights.reserve(static_cast<std::size_t>(W[l].size()));
    for (Eigen::Index r = 0; r < W[l].rows(); ++r)
      for (Eigen::Index c = 0; c < W[l].cols(); ++c) weights.push_back(W[l](r, c));
    layer["weights"] = weights;
    std::vector<double> bias(b[l].data(), b[l].data() + b[l].size());
    layer["bias"] = bias;
    layers.push_back(std::move(layer));
  }
  doc["layers"] = std::move(layers);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << doc.dump(2) << "\n";
}

MlpParams MlpParams::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw Error(path + ": " + e.what());
  }
  if (doc.value("kind", "") != std::string("model")) throw Error(path + ": not a model file");
  MlpParams p;
  p.dims = doc.at("dims").get<std::vector<int>>();
  p.activation = activation_from(doc.at("activation").get<std::string>());
  p.selu_lambda = doc.at("selu_lambda").get<double>();
  p.selu_alpha = doc.at("selu_alpha").get<double>();
  p.schema_hash = parse_hex(doc.at("schema_hash").get<std::string>());
  for (const auto& layer : doc.at("layers")) {
    auto rows = layer.at("rows").get<Eigen::Index>();
    auto cols = layer.at("cols").get<Eigen::Index>();
    auto weights = layer.at("weights").get<std::vector<double>>();
    auto bias = layer.at("bias").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(weights.size()) != rows * cols ||
        static_cast<Eigen::Index>(bias.size()) != rows)
      throw Error(path + ": layer size mismatch");
    Eigen::MatrixXd W(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c)
        W(r, c) = weights[static_cast<std::size_t>(r * cols + c)];
    p.W.push_back(std::move(W));
    p.b.push_back(Eigen::Map<Eigen::VectorXd>(bias.data(), rows));
  }
  p.validate();
  return p;
}

}  // namespace fatigue
