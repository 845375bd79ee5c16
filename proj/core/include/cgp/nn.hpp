#pragma once

#include "cgp/graph.hpp"
#include "cgp/propagation.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cgp {

enum class LayerKind { GIN, GCN };
enum class Task { Classification, Regression };

LayerKind parse_layer_kind(std::string_view name);
std::string_view to_string(LayerKind kind);

/// Affine map y = x * weight + bias, applied row-wise.
struct Dense {
  Eigen::MatrixXd weight;  // in x out
  Eigen::MatrixXd bias;    // 1 x out
};

/// One message-passing layer. GIN uses eps, first and second (the MLP phi);
/// GCN uses first only and leaves the rest empty.
struct LayerParams {
  Eigen::MatrixXd eps;  // 1 x 1
  Dense first;
  Dense second;
};

struct ModelParams {
  LayerKind kind = LayerKind::GIN;
  std::vector<LayerParams> layers;
  Dense head;  // hidden x 1

  std::size_t input_dim() const;
  std::size_t hidden_dim() const;
  std::size_t parameter_count() const;
};

/// Calls f(name, tensor) for every non-empty tensor in a fixed order.
template <typename Params, typename F>
void for_each_tensor(Params& p, F&& f) {
  for (std::size_t i = 0; i < p.layers.size(); ++i) {
    auto& l = p.layers[i];
    const std::string prefix = "layers." + std::to_string(i) + ".";
    if (l.eps.size()) f(prefix + "eps", l.eps);
    f(prefix + "W1", l.first.weight);
    f(prefix + "b1", l.first.bias);
    if (l.second.weight.size()) {
      f(prefix + "W2", l.second.weight);
      f(prefix + "b2", l.second.bias);
    }
  }
  f(std::string("head.W"), p.head.weight);
  f(std::string("head.b"), p.head.bias);
}

/// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights and biases; eps = 0.
ModelParams init_params(LayerKind kind, std::size_t input_dim, std::size_t hidden_dim,
                        std::size_t num_layers, std::uint64_t seed);
/// Same shapes as `like`, all zeros.
ModelParams zeros_like(const ModelParams& like);

std::vector<double> flatten(const ModelParams& p);
void unflatten(ModelParams& p, std::span<const double> values);

/// Checkpoint: JSON array of {"name", "shape": [rows, cols], "data": [row-major values]}.
nlohmann::json save_checkpoint(const ModelParams& p);
ModelParams load_checkpoint(const nlohmann::json& doc);

// ---------------------------------------------------------------------------
// Layers

/// (1 + eps) x_u + sum of neighbour rows; a flagged self-loop adds x_u once more.
Eigen::MatrixXd gin_aggregate(const Eigen::MatrixXd& x, const UGraph& g, double eps);

/// h_u = phi((1 + eps) x_u + sum_{v in N(u)} x_v), phi = ReLU o Dense o ReLU o Dense.
Eigen::MatrixXd gin_layer(const Eigen::MatrixXd& x, const UGraph& g, const LayerParams& p);

/// D^{-1/2} (A + I) D^{-1/2} x with D = deg + 1. A flagged self-loop is the same
/// diagonal entry as the added identity, not a second one.
Eigen::MatrixXd gcn_propagate(const Eigen::MatrixXd& x, const UGraph& g);

/// ReLU(D^{-1/2} (A + I) D^{-1/2} x W + b).
Eigen::MatrixXd gcn_layer(const Eigen::MatrixXd& x, const UGraph& g, const LayerParams& p);

// ---------------------------------------------------------------------------
// Model

struct ForwardResult {
  Eigen::MatrixXd embeddings;  // extended_count x hidden
  double prediction = 0.0;     // logit (classification) or value (regression)
};

/// Sum over rows 0..original_count-1 of `embeddings`, then the linear head.
double readout(const PropagationPlan& plan, const ModelParams& params,
               const Eigen::MatrixXd& embeddings);

/// Extends x per plan.virtual_init, applies each scheduled layer, reads out.
ForwardResult model_forward(const PropagationPlan& plan, const ModelParams& params,
                            const FeatureMatrix& x);

/// Raised when a loss evaluates to NaN or infinity.
class NonFiniteLoss : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Sample {
  const PropagationPlan* plan = nullptr;
  const FeatureMatrix* features = nullptr;
  double label = 0.0;
};

struct SampleGradients {
  double loss = 0.0;
  ModelParams grads;
  Eigen::MatrixXd input_grad;  // d loss / d extended input features
};

/// Binary cross-entropy on the logit (classification) or absolute error (regression).
double sample_loss(double prediction, double label, Task task);

SampleGradients sample_gradients(const Sample& sample, const ModelParams& params, Task task);

struct LossGrads {
  double loss = 0.0;
  ModelParams grads;
};

/// Mean loss and mean gradients over the batch; graphs are processed one at a time.
LossGrads loss_and_grads(std::span<const Sample> batch, const ModelParams& params, Task task);

// ---------------------------------------------------------------------------
// Optimiser

struct AdamState {
  ModelParams m;
  ModelParams v;
  std::size_t step = 0;
};

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

AdamState adam_init(const ModelParams& params);
void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state,
               const AdamOptions& options = {});

// ---------------------------------------------------------------------------
// Sum task and training

enum class SumStructure { Cayley24, Star, BA, Empty, GNP };

SumStructure parse_sum_structure(std::string_view name);
std::string_view to_string(SumStructure s);

struct SumTaskOptions {
  std::size_t node_count = 20;  // ignored for Cayley24 (always 24)
  std::size_t feature_dim = 128;
  std::size_t ba_attachments = 2;
  double gnp_probability = 0.5;
};

struct SumTaskDataset {
  SumStructure structure = SumStructure::Empty;
  Eigen::VectorXd teacher;  // linear readout applied to the summed features
  std::vector<UGraph> graphs;
  std::vector<FeatureMatrix> features;
  std::vector<double> labels;  // 1 if teacher output > 0 else 0

  std::size_t size() const { return graphs.size(); }
};

/// Graph-independent binary labels from a sum-then-linear teacher. For a fixed
/// seed the teacher and every feature row are shared across structures, so
/// datasets differ only in their graphs.
SumTaskDataset gen_sum_task(SumStructure structure, std::size_t size, std::uint64_t seed,
                            const SumTaskOptions& options = {});

/// Teacher scalar output for features x.
double sum_teacher(const Eigen::VectorXd& teacher, const FeatureMatrix& x);

struct TrainConfig {
  double lr = 1e-3;
  std::size_t epochs = 100;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  std::size_t hidden_dim = 64;
  std::size_t num_layers = 1;
  Scheme scheme = Scheme::Base;
  LayerKind layer = LayerKind::GIN;
  Task task = Task::Classification;
};

struct RunResult {
  double train_error = 0.0;
  double test_error = 0.0;
  double final_loss = 0.0;
  bool failed = false;
  std::string failure;
  ModelParams params;
};

/// Error rate (classification) or mean absolute error (regression).
double evaluate_error(std::span<const Sample> samples, const ModelParams& params, Task task);

/// Trains one model from config.seed with shuffled mini-batch Adam.
RunResult train_run(std::span<const Sample> train, std::span<const Sample> test,
                    const TrainConfig& config);

struct CurveRow {
  std::string structure;
  std::size_t train_size = 0;
  std::uint64_t seed = 0;
  double train_error = 0.0;
  double test_error = 0.0;
  bool failed = false;
};

using PlanBuilder = std::function<PropagationPlan(const UGraph&)>;

/// Learning curve: the last `test_size` samples of `dataset` form the test set;
/// each train size uses the leading samples. One run per (train_size, seed),
/// executed on up to `threads` workers and returned sorted by (train_size, seed).
std::vector<CurveRow> train(const PlanBuilder& plan_builder, const SumTaskDataset& dataset,
                            const TrainConfig& config, std::span<const std::size_t> train_sizes,
                            std::span<const std::uint64_t> seeds, std::size_t test_size,
                            unsigned threads = 1);

/// CSV with header structure,train_size,seed,train_error,test_error (failed runs print nan).
std::string curve_csv(std::span<const CurveRow> rows);

}  // namespace cgp
