#include "cgp/nn.hpp"

#include "cgp/cayley.hpp"
#include "cgp/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>
#include <tuple>

namespace cgp {

LayerKind parse_layer_kind(std::string_view name) {
  if (name == "GIN" || name == "gin") return LayerKind::GIN;
  if (name == "GCN" || name == "gcn") return LayerKind::GCN;
  throw std::invalid_argument("unknown layer kind '" + std::string(name) + "'");
}

std::string_view to_string(LayerKind kind) { return kind == LayerKind::GIN ? "GIN" : "GCN"; }

// ---------------------------------------------------------------------------
// Parameters

std::size_t ModelParams::input_dim() const {
  return layers.empty() ? 0 : static_cast<std::size_t>(layers.front().first.weight.rows());
}

std::size_t ModelParams::hidden_dim() const { return static_cast<std::size_t>(head.weight.rows()); }

std::size_t ModelParams::parameter_count() const {
  std::size_t count = 0;
  for_each_tensor(*this, [&](const std::string&, const Eigen::MatrixXd& t) { count += t.size(); });
  return count;
}

namespace {

Dense init_dense(std::size_t in, std::size_t out, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  std::uniform_real_distribution<double> unif(-bound, bound);
  Dense d{Eigen::MatrixXd(in, out), Eigen::MatrixXd(1, out)};
  for (Eigen::Index c = 0; c < d.weight.cols(); ++c)
    for (Eigen::Index r = 0; r < d.weight.rows(); ++r) d.weight(r, c) = unif(rng);
  for (Eigen::Index c = 0; c < d.bias.cols(); ++c) d.bias(0, c) = unif(rng);
  return d;
}

}  // namespace

ModelParams init_params(LayerKind kind, std::size_t input_dim, std::size_t hidden_dim,
                        std::size_t num_layers, std::uint64_t seed) {
  if (input_dim == 0 || hidden_dim == 0 || num_layers == 0) {
    throw std::invalid_argument("init_params: dimensions and layer count must be positive");
  }
  Rng rng(seed);
  ModelParams p;
  p.kind = kind;
  for (std::size_t l = 0; l < num_layers; ++l) {
    const std::size_t in = l == 0 ? input_dim : hidden_dim;
    LayerParams layer;
    layer.first = init_dense(in, hidden_dim, rng);
    if (kind == LayerKind::GIN) {
      layer.eps = Eigen::MatrixXd::Zero(1, 1);
      layer.second = init_dense(hidden_dim, hidden_dim, rng);
    }
    p.layers.push_back(std::move(layer));
  }
  p.head = init_dense(hidden_dim, 1, rng);
  return p;
}

ModelParams zeros_like(const ModelParams& like) {
  ModelParams z = like;
  for_each_tensor(z, [](const std::string&, Eigen::MatrixXd& t) { t.setZero(); });
  return z;
}

std::vector<double> flatten(const ModelParams& p) {
  std::vector<double> out;
  for_each_tensor(p, [&](const std::string&, const Eigen::MatrixXd& t) {
    for (Eigen::Index r = 0; r < t.rows(); ++r)
      for (Eigen::Index c = 0; c < t.cols(); ++c) out.push_back(t(r, c));
  });
  return out;
}

void unflatten(ModelParams& p, std::span<const double> values) {
  std::size_t i = 0;
  for_each_tensor(p, [&](const std::string&, Eigen::MatrixXd& t) {
    for (Eigen::Index r = 0; r < t.rows(); ++r)
      for (Eigen::Index c = 0; c < t.cols(); ++c) {
        if (i >= values.size()) throw std::invalid_argument("unflatten: too few values");
        t(r, c) = values[i++];
      }
  });
  if (i != values.size()) throw std::invalid_argument("unflatten: too many values");
}

nlohmann::json save_checkpoint(const ModelParams& p) {
  nlohmann::json doc = nlohmann::json::array();
  for_each_tensor(p, [&](const std::string& name, const Eigen::MatrixXd& t) {
    std::vector<double> data;
    data.reserve(t.size());
    for (Eigen::Index r = 0; r < t.rows(); ++r)
      for (Eigen::Index c = 0; c < t.cols(); ++c) data.push_back(t(r, c));
    doc.push_back({{"name", name}, {"shape", {t.rows(), t.cols()}}, {"data", data}});
  });
  return doc;
}

ModelParams load_checkpoint(const nlohmann::json& doc) {
  if (!doc.is_array()) throw InputError("checkpoint: expected a JSON array");
  std::map<std::string, Eigen::MatrixXd> tensors;
  for (const auto& entry : doc) {
    const auto name = entry.at("name").get<std::string>();
    const auto shape = entry.at("shape").get<std::vector<Eigen::Index>>();
    const auto data = entry.at("data").get<std::vector<double>>();
    if (shape.size() != 2 || shape[0] * shape[1] != static_cast<Eigen::Index>(data.size())) {
      throw InputError("checkpoint: tensor '" + name + "' has inconsistent shape");
    }
    Eigen::MatrixXd t(shape[0], shape[1]);
    for (Eigen::Index r = 0; r < t.rows(); ++r)
      for (Eigen::Index c = 0; c < t.cols(); ++c) t(r, c) = data[r * t.cols() + c];
    tensors.emplace(name, std::move(t));
  }
  auto take = [&](const std::string& name) {
    auto it = tensors.find(name);
    if (it == tensors.end()) throw InputError("checkpoint: missing tensor '" + name + "'");
    return it->second;
  };
  ModelParams p;
  p.kind = tensors.count("layers.0.W2") ? LayerKind::GIN : LayerKind::GCN;
  for (std::size_t l = 0; tensors.count("layers." + std::to_string(l) + ".W1"); ++l) {
    const std::string prefix = "layers." + std::to_string(l) + ".";
    LayerParams layer;
    layer.first = {take(prefix + "W1"), take(prefix + "b1")};
    if (p.kind == LayerKind::GIN) {
      layer.eps = take(prefix + "eps");
      layer.second = {take(prefix + "W2"), take(prefix + "b2")};
    }
    p.layers.push_back(std::move(layer));
  }
  if (p.layers.empty()) throw InputError("checkpoint: no layers");
  p.head = {take("head.W"), take("head.b")};
  return p;
}

// ---------------------------------------------------------------------------
// Layers

namespace {

Eigen::MatrixXd neighbor_sum(const Eigen::MatrixXd& x, const UGraph& g) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(x.rows(), x.cols());
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.neighbors(u)) out.row(u) += x.row(v);
  }
  for (NodeId u : g.self_loops()) out.row(u) += x.row(u);
  return out;
}

void check_rows(const Eigen::MatrixXd& x, const UGraph& g, const char* who) {
  if (static_cast<std::size_t>(x.rows()) != g.node_count()) {
    throw std::invalid_argument(std::string(who) + ": feature rows (" + std::to_string(x.rows()) +
                                ") != node count (" + std::to_string(g.node_count()) + ")");
  }
}

void check_dense(const Dense& d, Eigen::Index in, const char* who) {
  if (d.weight.rows() != in || d.bias.rows() != 1 || d.bias.cols() != d.weight.cols()) {
    throw std::invalid_argument(std::string(who) + ": parameter shape mismatch");
  }
}

Eigen::MatrixXd affine(const Eigen::MatrixXd& x, const Dense& d) {
  return (x * d.weight).rowwise() + d.bias.row(0);
}

Eigen::MatrixXd relu(const Eigen::MatrixXd& a) { return a.cwiseMax(0.0); }

Eigen::MatrixXd relu_mask(const Eigen::MatrixXd& grad, const Eigen::MatrixXd& pre) {
  return (pre.array() > 0.0).select(grad, 0.0);
}

}  // namespace

Eigen::MatrixXd gin_aggregate(const Eigen::MatrixXd& x, const UGraph& g, double eps) {
  check_rows(x, g, "gin_aggregate");
  return (1.0 + eps) * x + neighbor_sum(x, g);
}

Eigen::MatrixXd gin_layer(const Eigen::MatrixXd& x, const UGraph& g, const LayerParams& p) {
  if (p.eps.size() != 1) throw std::invalid_argument("gin_layer: missing eps");
  check_dense(p.first, x.cols(), "gin_layer");
  check_dense(p.second, p.first.weight.cols(), "gin_layer");
  const Eigen::MatrixXd z = gin_aggregate(x, g, p.eps(0, 0));
  return relu(affine(relu(affine(z, p.first)), p.second));
}

Eigen::MatrixXd gcn_propagate(const Eigen::MatrixXd& x, const UGraph& g) {
  check_rows(x, g, "gcn_propagate");
  Eigen::VectorXd inv_sqrt(x.rows());
  for (NodeId u = 0; u < g.node_count(); ++u) {
    inv_sqrt(u) = 1.0 / std::sqrt(static_cast<double>(g.degree(u) + 1));
  }
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (NodeId u = 0; u < g.node_count(); ++u) {
    out.row(u) = (inv_sqrt(u) * inv_sqrt(u)) * x.row(u);
    for (NodeId v : g.neighbors(u)) out.row(u) += (inv_sqrt(u) * inv_sqrt(v)) * x.row(v);
  }
  return out;
}

Eigen::MatrixXd gcn_layer(const Eigen::MatrixXd& x, const UGraph& g, const LayerParams& p) {
  check_dense(p.first, x.cols(), "gcn_layer");
  return relu(affine(gcn_propagate(x, g), p.first));
}

// ---------------------------------------------------------------------------
// Model

namespace {

struct LayerTrace {
  Eigen::MatrixXd input;
  Eigen::MatrixXd z;   // aggregated input
  Eigen::MatrixXd a1;  // first pre-activation
  Eigen::MatrixXd h1;
  Eigen::MatrixXd a2;  // GIN only
  Eigen::MatrixXd out;
};

struct Trace {
  std::vector<LayerTrace> layers;
  Eigen::MatrixXd pooled;  // 1 x hidden
  double prediction = 0.0;
};

void check_model(const PropagationPlan& plan, const ModelParams& params, const FeatureMatrix& x) {
  if (static_cast<std::size_t>(x.rows()) != plan.original_count) {
    throw std::invalid_argument("model_forward: features have " + std::to_string(x.rows()) +
                                " rows, plan expects " + std::to_string(plan.original_count));
  }
  if (params.layers.size() != plan.num_layers()) {
    throw std::invalid_argument("model_forward: plan has " + std::to_string(plan.num_layers()) +
                                " layers, params have " + std::to_string(params.layers.size()));
  }
  if (params.input_dim() != static_cast<std::size_t>(x.cols())) {
    throw std::invalid_argument("model_forward: feature width does not match params");
  }
}

Eigen::MatrixXd pool(const PropagationPlan& plan, const Eigen::MatrixXd& embeddings) {
  return embeddings.topRows(static_cast<Eigen::Index>(plan.original_count)).colwise().sum();
}

Trace run_forward(const PropagationPlan& plan, const ModelParams& params, const FeatureMatrix& x) {
  check_model(plan, params, x);
  Trace t;
  t.layers.resize(plan.num_layers());
  Eigen::MatrixXd h = extend_features(x, plan.extended_count, plan.virtual_init);
  for (std::size_t l = 0; l < plan.num_layers(); ++l) {
    const UGraph& g = plan.layer_graph(l);
    const LayerParams& p = params.layers[l];
    LayerTrace& lt = t.layers[l];
    lt.input = std::move(h);
    if (params.kind == LayerKind::GIN) {
      check_dense(p.first, lt.input.cols(), "gin_layer");
      check_dense(p.second, p.first.weight.cols(), "gin_layer");
      lt.z = gin_aggregate(lt.input, g, p.eps(0, 0));
      lt.a1 = affine(lt.z, p.first);
      lt.h1 = relu(lt.a1);
      lt.a2 = affine(lt.h1, p.second);
      lt.out = relu(lt.a2);
    } else {
      check_dense(p.first, lt.input.cols(), "gcn_layer");
      lt.z = gcn_propagate(lt.input, g);
      lt.a1 = affine(lt.z, p.first);
      lt.out = relu(lt.a1);
    }
    h = lt.out;
  }
  t.pooled = pool(plan, h);
  t.prediction = (t.pooled * params.head.weight)(0, 0) + params.head.bias(0, 0);
  return t;
}

}  // namespace

double readout(const PropagationPlan& plan, const ModelParams& params,
               const Eigen::MatrixXd& embeddings) {
  if (static_cast<std::size_t>(embeddings.rows()) != plan.extended_count ||
      embeddings.cols() != params.head.weight.rows()) {
    throw std::invalid_argument("readout: embedding shape mismatch");
  }
  return (pool(plan, embeddings) * params.head.weight)(0, 0) + params.head.bias(0, 0);
}

ForwardResult model_forward(const PropagationPlan& plan, const ModelParams& params,
                            const FeatureMatrix& x) {
  Trace t = run_forward(plan, params, x);
  return {std::move(t.layers.back().out), t.prediction};
}

double sample_loss(double prediction, double label, Task task) {
  if (task == Task::Regression) return std::abs(prediction - label);
  return std::max(prediction, 0.0) - prediction * label + std::log1p(std::exp(-std::abs(prediction)));
}

SampleGradients sample_gradients(const Sample& sample, const ModelParams& params, Task task) {
  const PropagationPlan& plan = *sample.plan;
  Trace t = run_forward(plan, params, *sample.features);
  SampleGradients out;
  out.loss = sample_loss(t.prediction, sample.label, task);
  if (!std::isfinite(out.loss)) {
    std::ostringstream os;
    os << "non-finite loss " << out.loss << " (prediction " << t.prediction << ", label "
       << sample.label << ")";
    throw NonFiniteLoss(os.str());
  }
  double dpred = 0.0;
  if (task == Task::Regression) {
    const double diff = t.prediction - sample.label;
    dpred = diff > 0 ? 1.0 : (diff < 0 ? -1.0 : 0.0);
  } else {
    dpred = 1.0 / (1.0 + std::exp(-t.prediction)) - sample.label;
  }

  ModelParams& g = out.grads;
  g = zeros_like(params);
  g.head.weight = dpred * t.pooled.transpose();
  g.head.bias(0, 0) = dpred;

  const auto original = static_cast<Eigen::Index>(plan.original_count);
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(t.layers.back().out.rows(), t.layers.back().out.cols());
  grad.topRows(original).rowwise() = dpred * params.head.weight.col(0).transpose();

  for (std::size_t l = plan.num_layers(); l-- > 0;) {
    const UGraph& graph = plan.layer_graph(l);
    const LayerParams& p = params.layers[l];
    const LayerTrace& lt = t.layers[l];
    LayerParams& gl = g.layers[l];
    Eigen::MatrixXd dz;
    if (params.kind == LayerKind::GIN) {
      const Eigen::MatrixXd da2 = relu_mask(grad, lt.a2);
      gl.second.weight = lt.h1.transpose() * da2;
      gl.second.bias = da2.colwise().sum();
      const Eigen::MatrixXd da1 = relu_mask(da2 * p.second.weight.transpose(), lt.a1);
      gl.first.weight = lt.z.transpose() * da1;
      gl.first.bias = da1.colwise().sum();
      dz = da1 * p.first.weight.transpose();
      gl.eps(0, 0) = dz.cwiseProduct(lt.input).sum();
      // The aggregation operator is symmetric, so its adjoint is itself.
      grad = (1.0 + p.eps(0, 0)) * dz + neighbor_sum(dz, graph);
    } else {
      const Eigen::MatrixXd da1 = relu_mask(grad, lt.a1);
      gl.first.weight = lt.z.transpose() * da1;
      gl.first.bias = da1.colwise().sum();
      grad = gcn_propagate(da1 * p.first.weight.transpose(), graph);
    }
  }
  out.input_grad = std::move(grad);
  return out;
}

LossGrads loss_and_grads(std::span<const Sample> batch, const ModelParams& params, Task task) {
  if (batch.empty()) throw std::invalid_argument("loss_and_grads: empty batch");
  LossGrads out{0.0, zeros_like(params)};
  for (const Sample& s : batch) {
    SampleGradients sg = sample_gradients(s, params, task);
    out.loss += sg.loss;
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
      auto& acc = out.grads.layers[l];
      const auto& add = sg.grads.layers[l];
      if (acc.eps.size()) acc.eps += add.eps;
      acc.first.weight += add.first.weight;
      acc.first.bias += add.first.bias;
      if (acc.second.weight.size()) {
        acc.second.weight += add.second.weight;
        acc.second.bias += add.second.bias;
      }
    }
    out.grads.head.weight += sg.grads.head.weight;
    out.grads.head.bias += sg.grads.head.bias;
  }
  const double scale = 1.0 / static_cast<double>(batch.size());
  out.loss *= scale;
  for_each_tensor(out.grads, [&](const std::string&, Eigen::MatrixXd& t) { t *= scale; });
  return out;
}

// ---------------------------------------------------------------------------
// Adam

AdamState adam_init(const ModelParams& params) {
  return {zeros_like(params), zeros_like(params), 0};
}

void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state,
               const AdamOptions& o) {
  ++state.step;
  const double c1 = 1.0 - std::pow(o.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(o.beta2, static_cast<double>(state.step));
  std::vector<Eigen::MatrixXd*> p, m, v;
  std::vector<const Eigen::MatrixXd*> g;
  for_each_tensor(params, [&](const std::string&, Eigen::MatrixXd& t) { p.push_back(&t); });
  for_each_tensor(grads, [&](const std::string&, const Eigen::MatrixXd& t) { g.push_back(&t); });
  for_each_tensor(state.m, [&](const std::string&, Eigen::MatrixXd& t) { m.push_back(&t); });
  for_each_tensor(state.v, [&](const std::string&, Eigen::MatrixXd& t) { v.push_back(&t); });
  if (g.size() != p.size() || m.size() != p.size() || v.size() != p.size()) {
    throw std::invalid_argument("adam_step: parameter structure mismatch");
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (g[i]->rows() != p[i]->rows() || g[i]->cols() != p[i]->cols()) {
      throw std::invalid_argument("adam_step: gradient shape mismatch");
    }
    *m[i] = o.beta1 * *m[i] + (1.0 - o.beta1) * *g[i];
    *v[i] = o.beta2 * *v[i] + (1.0 - o.beta2) * g[i]->cwiseProduct(*g[i]);
    p[i]->array() -= o.lr * (m[i]->array() / c1) / ((v[i]->array() / c2).sqrt() + o.eps);
  }
}

// ---------------------------------------------------------------------------
// Sum task

SumStructure parse_sum_structure(std::string_view name) {
  if (name == "Cayley24") return SumStructure::Cayley24;
  if (name == "Star") return SumStructure::Star;
  if (name == "BA") return SumStructure::BA;
  if (name == "Empty") return SumStructure::Empty;
  if (name == "GNP" || name == "ER") return SumStructure::GNP;
  throw std::invalid_argument("unknown sum-task structure '" + std::string(name) + "'");
}

std::string_view to_string(SumStructure s) {
  switch (s) {
    case SumStructure::Cayley24: return "Cayley24";
    case SumStructure::Star: return "Star";
    case SumStructure::BA: return "BA";
    case SumStructure::Empty: return "Empty";
    case SumStructure::GNP: return "GNP";
  }
  return "?";
}

double sum_teacher(const Eigen::VectorXd& teacher, const FeatureMatrix& x) {
  return x.colwise().sum().dot(teacher.transpose());
}

SumTaskDataset gen_sum_task(SumStructure structure, std::size_t size, std::uint64_t seed,
                            const SumTaskOptions& options) {
  enum : std::uint64_t { kTeacher = 0, kFeatures = 1, kGraphs = 2 };
  SumTaskDataset ds;
  ds.structure = structure;
  const std::size_t nodes = structure == SumStructure::Cayley24 ? 24 : options.node_count;
  const std::size_t dim = options.feature_dim;

  std::normal_distribution<double> normal(0.0, 1.0);
  Rng teacher_rng(derive_seed(seed, kTeacher));
  ds.teacher.resize(static_cast<Eigen::Index>(dim));
  for (auto& w : ds.teacher) w = normal(teacher_rng);

  std::shared_ptr<const UGraph> cayley;
  if (structure == SumStructure::Cayley24) cayley = CayleyCache::global().graph(3);

  const std::uint64_t feature_seed = derive_seed(seed, kFeatures);
  const std::uint64_t graph_seed = derive_seed(seed, kGraphs);
  for (std::size_t i = 0; i < size; ++i) {
    Rng rng(derive_seed(feature_seed, i));
    FeatureMatrix x(static_cast<Eigen::Index>(nodes), static_cast<Eigen::Index>(dim));
    for (Eigen::Index r = 0; r < x.rows(); ++r)
      for (Eigen::Index c = 0; c < x.cols(); ++c) x(r, c) = normal(rng);

    GraphParams gp;
    gp.node_count = nodes;
    gp.attachments = options.ba_attachments;
    gp.edge_probability = options.gnp_probability;
    const std::uint64_t gs = derive_seed(graph_seed, i);
    switch (structure) {
      case SumStructure::Cayley24: ds.graphs.push_back(*cayley); break;
      case SumStructure::Star: ds.graphs.push_back(gen_graph(GraphKind::Star, gp, gs)); break;
      case SumStructure::BA: ds.graphs.push_back(gen_graph(GraphKind::BarabasiAlbert, gp, gs)); break;
      case SumStructure::Empty: ds.graphs.push_back(gen_graph(GraphKind::Empty, gp, gs)); break;
      case SumStructure::GNP: ds.graphs.push_back(gen_graph(GraphKind::ErdosRenyi, gp, gs)); break;
    }
    ds.labels.push_back(sum_teacher(ds.teacher, x) > 0.0 ? 1.0 : 0.0);
    ds.features.push_back(std::move(x));
  }
  return ds;
}

// ---------------------------------------------------------------------------
// Training

double evaluate_error(std::span<const Sample> samples, const ModelParams& params, Task task) {
  if (samples.empty()) return 0.0;
  double total = 0.0;
  for (const Sample& s : samples) {
    const double pred = model_forward(*s.plan, params, *s.features).prediction;
    if (task == Task::Classification) {
      total += ((pred > 0.0 ? 1.0 : 0.0) != s.label) ? 1.0 : 0.0;
    } else {
      total += std::abs(pred - s.label);
    }
  }
  return total / static_cast<double>(samples.size());
}

RunResult train_run(std::span<const Sample> train, std::span<const Sample> test,
                    const TrainConfig& config) {
  if (train.empty()) throw std::invalid_argument("train_run: empty training set");
  if (config.batch_size == 0 || config.epochs == 0 || !(config.lr > 0.0)) {
    throw std::invalid_argument("train_run: batch size, epochs and lr must be positive");
  }
  RunResult result;
  const auto in_dim = static_cast<std::size_t>(train.front().features->cols());
  result.params = init_params(config.layer, in_dim, config.hidden_dim, config.num_layers,
                              derive_seed(config.seed, 101));
  AdamState state = adam_init(result.params);
  const AdamOptions adam{config.lr};

  Rng shuffle_rng(derive_seed(config.seed, 202));
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<Sample> batch;
  try {
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
      std::shuffle(order.begin(), order.end(), shuffle_rng);
      double epoch_loss = 0.0;
      for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
        batch.clear();
        for (std::size_t i = start; i < std::min(order.size(), start + config.batch_size); ++i) {
          batch.push_back(train[order[i]]);
        }
        LossGrads lg = loss_and_grads(batch, result.params, config.task);
        epoch_loss += lg.loss * static_cast<double>(batch.size());
        adam_step(result.params, lg.grads, state, adam);
      }
      result.final_loss = epoch_loss / static_cast<double>(order.size());
    }
  } catch (const NonFiniteLoss& e) {
    result.failed = true;
    result.failure = e.what();
    result.train_error = result.test_error = std::numeric_limits<double>::quiet_NaN();
    return result;
  }
  result.train_error = evaluate_error(train, result.params, config.task);
  result.test_error = evaluate_error(test, result.params, config.task);
  return result;
}

std::vector<CurveRow> train(const PlanBuilder& plan_builder, const SumTaskDataset& dataset,
                            const TrainConfig& config, std::span<const std::size_t> train_sizes,
                            std::span<const std::uint64_t> seeds, std::size_t test_size,
                            unsigned threads) {
  const std::size_t largest =
      train_sizes.empty() ? 0 : *std::max_element(train_sizes.begin(), train_sizes.end());
  if (largest + test_size > dataset.size()) {
    throw std::invalid_argument("train: dataset of " + std::to_string(dataset.size()) +
                                " samples cannot hold " + std::to_string(largest) + " train + " +
                                std::to_string(test_size) + " test samples");
  }
  std::vector<PropagationPlan> plans;
  plans.reserve(dataset.size());
  for (const auto& g : dataset.graphs) plans.push_back(plan_builder(g));
  std::vector<Sample> samples;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    samples.push_back({&plans[i], &dataset.features[i], dataset.labels[i]});
  }
  const std::span<const Sample> all(samples);
  const auto test = all.subspan(dataset.size() - test_size);

  struct Job {
    std::size_t train_size;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t size : train_sizes)
    for (std::uint64_t seed : seeds) jobs.push_back({size, seed});
  std::sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) {
    return std::tie(a.train_size, a.seed) < std::tie(b.train_size, b.seed);
  });

  std::vector<CurveRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      TrainConfig cfg = config;
      cfg.seed = jobs[j].seed;
      const RunResult r = train_run(all.first(jobs[j].train_size), test, cfg);
      rows[j] = {std::string(to_string(dataset.structure)), jobs[j].train_size, jobs[j].seed,
                 r.train_error, r.test_error, r.failed};
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return rows;
}

std::string curve_csv(std::span<const CurveRow> rows) {
  std::ostringstream os;
  os.precision(10);
  os << "structure,train_size,seed,train_error,test_error\n";
  for (const auto& r : rows) {
    os << r.structure << ',' << r.train_size << ',' << r.seed << ',';
    if (r.failed) {
      os << "nan,nan\n";
    } else {
      os << r.train_error << ',' << r.test_error << '\n';
    }
  }
  return os.str();
}

}  // namespace cgp
