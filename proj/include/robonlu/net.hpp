// Copyright 2026 The robonlu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ROBONLU_NET_HPP_
#define ROBONLU_NET_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "robonlu/linalg.hpp"
#include "robonlu/rng.hpp"

namespace robonlu {
namespace net {

enum class Cell { kRnn, kLstm };
enum class OutputMode { kLastStep, kPerStep };

std::string cell_name(Cell c);
Cell cell_from_name(const std::string& name);
std::string output_mode_name(OutputMode m);
OutputMode output_mode_from_name(const std::string& name);

struct SequenceModelConfig {
  Cell cell = Cell::kLstm;
  std::size_t layers = 1;
  std::size_t hidden = 100;
  bool bidirectional = false;
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;
  OutputMode output_mode = OutputMode::kLastStep;
  std::uint64_t seed = 1;

  void validate() const;
  std::size_t directions() const { return bidirectional ? 2u : 1u; }
  std::size_t layer_input_dim(std::size_t layer) const {
    return layer == 0 ? input_dim : hidden * directions();
  }
  // Width of the top layer's per-step output.
  std::size_t top_dim() const { return hidden * directions(); }

  bool operator==(const SequenceModelConfig&) const = default;
};

// "lstm-1x500", "rnn-1x500", "blstm-1x500", "dlstm-2x500", "dblstm-2x250".
// The optional leading d is informational (layers > 1); b means
// bidirectional. Cell/shape fields only; dims and mode come from the task.
SequenceModelConfig parse_architecture(const std::string& name);
std::string architecture_name(const SequenceModelConfig& config);

// One direction of one layer. RNN: w_in H x I, w_rec H x H, bias H.
// LSTM: 4H rows in gate order [input, forget, candidate, output].
struct LayerParams {
  linalg::Tensor w_in, w_rec, bias;
};

struct ModelParams {
  // layer-major, forward direction before backward: [l0 fwd, l0 bwd, l1 fwd, ...]
  std::vector<LayerParams> layers;
  linalg::Tensor proj_w;  // output_dim x top_dim
  linalg::Tensor proj_b;  // output_dim x 1

  static ModelParams zeros_like(const ModelParams& shape);
  void set_zero();

  template <typename F>
  void for_each_tensor(F f) {
    for (auto& l : layers) {
      f(l.w_in);
      f(l.w_rec);
      f(l.bias);
    }
    f(proj_w);
    f(proj_b);
  }
  template <typename F>
  void for_each_tensor(F f) const {
    for (const auto& l : layers) {
      f(l.w_in);
      f(l.w_rec);
      f(l.bias);
    }
    f(proj_w);
    f(proj_b);
  }
};

// Uniform [-s, s] per matrix with s = sqrt(6 / (fan_in + fan_out)); biases
// zero except the LSTM forget gate block, which starts at 1.
ModelParams init_params(const SequenceModelConfig& config);

// h = tanh(W x + U h_prev + b)
std::vector<double> rnn_step(const std::vector<double>& x,
                             const std::vector<double>& h_prev,
                             const LayerParams& params);

struct LstmState {
  std::vector<double> h, c;
};

// Three-gate LSTM with tanh candidate: c = f.c_prev + i.g, h = o.tanh(c).
LstmState lstm_step(const std::vector<double>& x,
                    const std::vector<double>& h_prev,
                    const std::vector<double>& c_prev,
                    const LayerParams& params);

// Everything backward() needs, kept per layer and direction and indexed by
// absolute step.
struct DirectionCache {
  std::vector<std::vector<double>> h;
  std::vector<std::vector<double>> gates;   // LSTM: post-activation [i f g o]
  std::vector<std::vector<double>> c;
  std::vector<std::vector<double>> tanh_c;
};

struct ForwardPass {
  std::size_t steps = 0;
  // [layer][t]; entry layers() holds the top layer's per-step output.
  std::vector<std::vector<std::vector<double>>> layer_inputs;
  std::vector<std::vector<DirectionCache>> cache;  // [layer][direction]
  // Raw scores, no softmax: T vectors (per_step) or one (last_step).
  std::vector<std::vector<double>> scores;
};

ForwardPass forward(const SequenceModelConfig& config,
                    const ModelParams& params,
                    const std::vector<std::vector<double>>& inputs);

std::vector<double> softmax(const std::vector<double>& scores);
// -log p[gold], with p floored at 1e-12.
double cross_entropy(const std::vector<double>& probs, std::size_t gold);

// Analytic BPTT. golds holds one index per step (per_step) or exactly one
// (last_step). Gradients are accumulated into a zeroed ModelParams shaped
// like params; returns the total loss.
double backward(const SequenceModelConfig& config, const ModelParams& params,
                const ForwardPass& pass, const std::vector<std::size_t>& golds,
                ModelParams& grads);

double global_norm(const ModelParams& grads);
// Scales all gradients so the global norm is at most max_norm.
void clip_by_global_norm(ModelParams& grads, double max_norm);

struct AdamState {
  ModelParams m, v;
  std::uint64_t t = 0;
  double lr = 0.01;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

  static AdamState create(const ModelParams& shape, double lr);
};
void adam_update(ModelParams& params, const ModelParams& grads,
                 AdamState& state);

struct AdagradState {
  ModelParams accum;
  double lr = 0.05;
  double eps = 1e-8;

  static AdagradState create(const ModelParams& shape, double lr);
};
void adagrad_update(ModelParams& params, const ModelParams& grads,
                    AdagradState& state);

struct TrainSample {
  std::vector<std::vector<double>> inputs;
  std::vector<std::size_t> targets;  // size T (per_step) or 1 (last_step)
};

struct TrainOptions {
  std::size_t epochs = 30;
  double lr = 0.01;
  std::uint64_t seed = 1;
  double clip_norm = 5.0;
  // Halve lr when the monitored loss fails to improve for `patience` epochs.
  bool halve_on_plateau = false;
  std::size_t patience = 3;
  const std::vector<TrainSample>* validation = nullptr;
};

struct TrainTrace {
  std::vector<double> epoch_loss;        // mean training loss per epoch
  std::vector<double> validation_loss;   // when a validation set is given
};

// Per-sentence Adam updates in seeded shuffled order.
TrainTrace train_model(const SequenceModelConfig& config, ModelParams& params,
                       const std::vector<TrainSample>& samples,
                       const TrainOptions& options);

struct Checkpoint {
  SequenceModelConfig config;
  ModelParams params;
  std::string vocab_fingerprint;
  std::vector<std::string> labels;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
// Rejects unknown format versions and any tensor whose shape disagrees with
// the stored config.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace net
}  // namespace robonlu

#endif  // ROBONLU_NET_HPP_
