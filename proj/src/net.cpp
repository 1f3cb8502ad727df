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

#include "robonlu/net.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "json.hpp"
#include "robonlu/error.hpp"

namespace robonlu {
namespace net {

namespace {

using nlohmann::json;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

constexpr double kLogFloor = 1e-12;

void check_vec(const std::vector<double>& v, std::size_t n,
               const char* what) {
  if (v.size() != n)
    throw ValidationError(std::string(what) + ": expected length " +
                          std::to_string(n) + ", got " +
                          std::to_string(v.size()));
}

// z = W x + U h_prev + b
void cell_preactivation(const LayerParams& p, const std::vector<double>& x,
                        const std::vector<double>& h_prev,
                        std::vector<double>& z) {
  z.assign(p.w_in.rows, 0.0);
  linalg::matvec(p.w_in, x.data(), z.data());
  linalg::matvec_add(p.w_rec, h_prev.data(), z.data());
  for (std::size_t r = 0; r < z.size(); ++r) z[r] += p.bias.data[r];
}

json tensor_to_json(const linalg::Tensor& t) {
  return json{{"rows", t.rows}, {"cols", t.cols}, {"data", t.data}};
}

linalg::Tensor tensor_from_json(const json& j) {
  linalg::Tensor t;
  t.rows = j.at("rows").get<std::size_t>();
  t.cols = j.at("cols").get<std::size_t>();
  t.data = j.at("data").get<std::vector<double>>();
  if (t.data.size() != t.rows * t.cols)
    throw ConfigError("checkpoint tensor data does not match its shape");
  return t;
}

}  // namespace

std::string cell_name(Cell c) { return c == Cell::kRnn ? "rnn" : "lstm"; }

Cell cell_from_name(const std::string& name) {
  if (name == "rnn") return Cell::kRnn;
  if (name == "lstm") return Cell::kLstm;
  throw ArgumentError("unknown cell kind: " + name);
}

std::string output_mode_name(OutputMode m) {
  return m == OutputMode::kLastStep ? "last_step" : "per_step";
}

OutputMode output_mode_from_name(const std::string& name) {
  if (name == "last_step") return OutputMode::kLastStep;
  if (name == "per_step") return OutputMode::kPerStep;
  throw ArgumentError("unknown output mode: " + name);
}

void SequenceModelConfig::validate() const {
  if (layers < 1 || hidden < 1 || input_dim < 1 || output_dim < 1)
    throw ValidationError("sequence model config: all dims must be >= 1");
}

SequenceModelConfig parse_architecture(const std::string& name) {
  // [d][b](rnn|lstm)-<layers>x<hidden>
  std::string s = name;
  SequenceModelConfig cfg;
  auto eat = [&s](const std::string& prefix) {
    if (s.rfind(prefix, 0) == 0) {
      s = s.substr(prefix.size());
      return true;
    }
    return false;
  };
  eat("d");
  cfg.bidirectional = eat("b");
  if (eat("lstm"))
    cfg.cell = Cell::kLstm;
  else if (eat("rnn"))
    cfg.cell = Cell::kRnn;
  else
    throw ArgumentError("bad architecture '" + name + "': expected rnn/lstm");
  if (s.empty() || s[0] != '-')
    throw ArgumentError("bad architecture '" + name + "': expected -LxH");
  s = s.substr(1);
  const auto x = s.find('x');
  if (x == std::string::npos)
    throw ArgumentError("bad architecture '" + name + "': expected LxH");
  try {
    cfg.layers = std::stoul(s.substr(0, x));
    cfg.hidden = std::stoul(s.substr(x + 1));
  } catch (const std::exception&) {
    throw ArgumentError("bad architecture '" + name + "': bad layer sizes");
  }
  if (cfg.layers < 1 || cfg.hidden < 1)
    throw ArgumentError("bad architecture '" + name + "': sizes must be >= 1");
  return cfg;
}

std::string architecture_name(const SequenceModelConfig& config) {
  std::string out;
  if (config.layers > 1) out += 'd';
  if (config.bidirectional) out += 'b';
  out += cell_name(config.cell);
  out += '-';
  out += std::to_string(config.layers);
  out += 'x';
  out += std::to_string(config.hidden);
  return out;
}

ModelParams ModelParams::zeros_like(const ModelParams& shape) {
  ModelParams z;
  z.layers.reserve(shape.layers.size());
  for (const auto& l : shape.layers)
    z.layers.push_back({linalg::Tensor(l.w_in.rows, l.w_in.cols),
                        linalg::Tensor(l.w_rec.rows, l.w_rec.cols),
                        linalg::Tensor(l.bias.rows, l.bias.cols)});
  z.proj_w = linalg::Tensor(shape.proj_w.rows, shape.proj_w.cols);
  z.proj_b = linalg::Tensor(shape.proj_b.rows, shape.proj_b.cols);
  return z;
}

void ModelParams::set_zero() {
  for_each_tensor([](linalg::Tensor& t) { t.fill(0.0); });
}

ModelParams init_params(const SequenceModelConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const std::size_t gate_rows = config.cell == Cell::kLstm ? 4 : 1;
  const std::size_t H = config.hidden;

  auto glorot = [&rng](std::size_t rows, std::size_t cols) {
    linalg::Tensor t(rows, cols);
    const double s =
        std::sqrt(6.0 / static_cast<double>(rows + cols));
    for (auto& x : t.data) x = rng.uniform(-s, s);
    return t;
  };

  ModelParams p;
  for (std::size_t l = 0; l < config.layers; ++l) {
    const std::size_t in = config.layer_input_dim(l);
    for (std::size_t dir = 0; dir < config.directions(); ++dir) {
      LayerParams lp;
      lp.w_in = glorot(gate_rows * H, in);
      lp.w_rec = glorot(gate_rows * H, H);
      lp.bias = linalg::Tensor(gate_rows * H, 1);
      if (config.cell == Cell::kLstm)
        for (std::size_t r = H; r < 2 * H; ++r) lp.bias.data[r] = 1.0;
      p.layers.push_back(std::move(lp));
    }
  }
  p.proj_w = glorot(config.output_dim, config.top_dim());
  p.proj_b = linalg::Tensor(config.output_dim, 1);
  return p;
}

std::vector<double> rnn_step(const std::vector<double>& x,
                             const std::vector<double>& h_prev,
                             const LayerParams& params) {
  check_vec(x, params.w_in.cols, "rnn_step input");
  check_vec(h_prev, params.w_rec.cols, "rnn_step hidden state");
  if (params.w_in.rows != params.w_rec.rows ||
      params.w_in.rows != params.bias.rows)
    throw ValidationError("rnn_step: inconsistent parameter shapes");
  std::vector<double> z;
  cell_preactivation(params, x, h_prev, z);
  for (auto& v : z) v = std::tanh(v);
  return z;
}

LstmState lstm_step(const std::vector<double>& x,
                    const std::vector<double>& h_prev,
                    const std::vector<double>& c_prev,
                    const LayerParams& params) {
  const std::size_t H = params.w_rec.cols;
  check_vec(x, params.w_in.cols, "lstm_step input");
  check_vec(h_prev, H, "lstm_step hidden state");
  check_vec(c_prev, H, "lstm_step cell state");
  if (params.w_in.rows != 4 * H || params.w_rec.rows != 4 * H ||
      params.bias.rows != 4 * H)
    throw ValidationError("lstm_step: inconsistent parameter shapes");
  std::vector<double> z;
  cell_preactivation(params, x, h_prev, z);
  LstmState s;
  s.h.resize(H);
  s.c.resize(H);
  for (std::size_t k = 0; k < H; ++k) {
    const double i = sigmoid(z[k]);
    const double f = sigmoid(z[H + k]);
    const double g = std::tanh(z[2 * H + k]);
    const double o = sigmoid(z[3 * H + k]);
    s.c[k] = f * c_prev[k] + i * g;
    s.h[k] = o * std::tanh(s.c[k]);
  }
  return s;
}

ForwardPass forward(const SequenceModelConfig& config,
                    const ModelParams& params,
                    const std::vector<std::vector<double>>& inputs) {
  config.validate();
  if (inputs.empty())
    throw ArgumentError("forward: input sequence must have at least one step");
  for (const auto& x : inputs) check_vec(x, config.input_dim, "forward input");

  const std::size_t T = inputs.size();
  const std::size_t H = config.hidden;
  const std::size_t dirs = config.directions();

  ForwardPass pass;
  pass.steps = T;
  pass.layer_inputs.resize(config.layers + 1);
  pass.layer_inputs[0] = inputs;
  pass.cache.assign(config.layers, std::vector<DirectionCache>(dirs));

  std::vector<double> z;
  for (std::size_t l = 0; l < config.layers; ++l) {
    for (std::size_t dir = 0; dir < dirs; ++dir) {
      const LayerParams& lp = params.layers[l * dirs + dir];
      DirectionCache& dc = pass.cache[l][dir];
      dc.h.assign(T, {});
      if (config.cell == Cell::kLstm) {
        dc.gates.assign(T, {});
        dc.c.assign(T, {});
        dc.tanh_c.assign(T, {});
      }
      std::vector<double> h_prev(H, 0.0), c_prev(H, 0.0);
      for (std::size_t step = 0; step < T; ++step) {
        const std::size_t t = dir == 0 ? step : T - 1 - step;
        const auto& x = pass.layer_inputs[l][t];
        cell_preactivation(lp, x, h_prev, z);
        if (config.cell == Cell::kRnn) {
          auto& h = dc.h[t];
          h.resize(H);
          for (std::size_t k = 0; k < H; ++k) h[k] = std::tanh(z[k]);
          h_prev = h;
        } else {
          auto& gates = dc.gates[t];
          gates.resize(4 * H);
          auto& c = dc.c[t];
          c.resize(H);
          auto& tc = dc.tanh_c[t];
          tc.resize(H);
          auto& h = dc.h[t];
          h.resize(H);
          for (std::size_t k = 0; k < H; ++k) {
            const double i = sigmoid(z[k]);
            const double f = sigmoid(z[H + k]);
            const double g = std::tanh(z[2 * H + k]);
            const double o = sigmoid(z[3 * H + k]);
            gates[k] = i;
            gates[H + k] = f;
            gates[2 * H + k] = g;
            gates[3 * H + k] = o;
            c[k] = f * c_prev[k] + i * g;
            tc[k] = std::tanh(c[k]);
            h[k] = o * tc[k];
          }
          h_prev = h;
          c_prev = c;
        }
      }
    }
    // Concatenated per-step output feeds the next layer (and the per-step
    // projection at the top).
    auto& out = pass.layer_inputs[l + 1];
    out.assign(T, {});
    for (std::size_t t = 0; t < T; ++t) {
      out[t].reserve(H * dirs);
      for (std::size_t dir = 0; dir < dirs; ++dir) {
        const auto& h = pass.cache[l][dir].h[t];
        out[t].insert(out[t].end(), h.begin(), h.end());
      }
    }
  }

  auto project = [&](const std::vector<double>& u) {
    std::vector<double> s(config.output_dim, 0.0);
    linalg::matvec(params.proj_w, u.data(), s.data());
    for (std::size_t r = 0; r < s.size(); ++r) s[r] += params.proj_b.data[r];
    return s;
  };

  if (config.output_mode == OutputMode::kPerStep) {
    pass.scores.reserve(T);
    for (std::size_t t = 0; t < T; ++t)
      pass.scores.push_back(project(pass.layer_inputs[config.layers][t]));
  } else {
    // Final state of each direction's recurrence: forward at T-1, backward
    // at 0.
    const auto& top = pass.cache[config.layers - 1];
    std::vector<double> u = top[0].h[T - 1];
    if (config.bidirectional)
      u.insert(u.end(), top[1].h[0].begin(), top[1].h[0].end());
    pass.scores.push_back(project(u));
  }
  return pass;
}

std::vector<double> softmax(const std::vector<double>& scores) {
  std::vector<double> p(scores.size());
  const double mx = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    p[i] = std::exp(scores[i] - mx);
    sum += p[i];
  }
  for (auto& v : p) v /= sum;
  return p;
}

double cross_entropy(const std::vector<double>& probs, std::size_t gold) {
  if (gold >= probs.size())
    throw ArgumentError("cross_entropy: gold index out of range");
  return -std::log(std::max(probs[gold], kLogFloor));
}

double backward(const SequenceModelConfig& config, const ModelParams& params,
                const ForwardPass& pass, const std::vector<std::size_t>& golds,
                ModelParams& grads) {
  const std::size_t T = pass.steps;
  const std::size_t H = config.hidden;
  const std::size_t dirs = config.directions();
  const bool per_step = config.output_mode == OutputMode::kPerStep;
  if (per_step ? golds.size() != T : golds.size() != 1)
    throw ValidationError("backward: gold count does not match output mode");

  // dL/dh accumulators, [layer][dir][t].
  std::vector<std::vector<std::vector<std::vector<double>>>> dh(
      config.layers,
      std::vector<std::vector<std::vector<double>>>(
          dirs, std::vector<std::vector<double>>(T,
                                                 std::vector<double>(H, 0.0))));

  double loss = 0.0;
  const std::size_t top = config.layers - 1;

  auto backprop_projection = [&](const std::vector<double>& score,
                                 std::size_t gold,
                                 const std::vector<double>& u,
                                 std::vector<double>& du) {
    auto p = softmax(score);
    loss += cross_entropy(p, gold);
    p[gold] -= 1.0;  // dL/dscore
    linalg::outer_add(grads.proj_w, p.data(), u.data());
    for (std::size_t r = 0; r < p.size(); ++r) grads.proj_b.data[r] += p[r];
    du.assign(u.size(), 0.0);
    linalg::matvec_transpose_add(params.proj_w, p.data(), du.data());
  };

  std::vector<double> du;
  if (per_step) {
    for (std::size_t t = 0; t < T; ++t) {
      backprop_projection(pass.scores[t], golds[t],
                          pass.layer_inputs[config.layers][t], du);
      for (std::size_t dir = 0; dir < dirs; ++dir)
        for (std::size_t k = 0; k < H; ++k)
          dh[top][dir][t][k] += du[dir * H + k];
    }
  } else {
    std::vector<double> u = pass.cache[top][0].h[T - 1];
    if (config.bidirectional)
      u.insert(u.end(), pass.cache[top][1].h[0].begin(),
               pass.cache[top][1].h[0].end());
    backprop_projection(pass.scores[0], golds[0], u, du);
    for (std::size_t k = 0; k < H; ++k) dh[top][0][T - 1][k] += du[k];
    if (config.bidirectional)
      for (std::size_t k = 0; k < H; ++k) dh[top][1][0][k] += du[H + k];
  }

  const std::vector<double> zeros_h(H, 0.0);
  std::vector<double> dz(config.cell == Cell::kLstm ? 4 * H : H);

  for (std::size_t l = config.layers; l-- > 0;) {
    const std::size_t in_dim = config.layer_input_dim(l);
    std::vector<std::vector<double>> dx(T, std::vector<double>(in_dim, 0.0));

    for (std::size_t dir = 0; dir < dirs; ++dir) {
      const LayerParams& lp = params.layers[l * dirs + dir];
      LayerParams& lg = grads.layers[l * dirs + dir];
      const DirectionCache& dc = pass.cache[l][dir];

      std::vector<double> dh_carry(H, 0.0), dc_carry(H, 0.0);
      // Reverse of this direction's processing order.
      for (std::size_t step = T; step-- > 0;) {
        const std::size_t t = dir == 0 ? step : T - 1 - step;
        const bool first = step == 0;
        const std::size_t t_prev = dir == 0 ? t - 1 : t + 1;
        const auto& h_prev = first ? zeros_h : dc.h[t_prev];
        const auto& x = pass.layer_inputs[l][t];

        std::vector<double>& dht = dh[l][dir][t];
        for (std::size_t k = 0; k < H; ++k) dht[k] += dh_carry[k];

        if (config.cell == Cell::kRnn) {
          const auto& h = dc.h[t];
          for (std::size_t k = 0; k < H; ++k)
            dz[k] = dht[k] * (1.0 - h[k] * h[k]);
        } else {
          const auto& g4 = dc.gates[t];
          const auto& tc = dc.tanh_c[t];
          const auto& c_prev = first ? zeros_h : dc.c[t_prev];
          for (std::size_t k = 0; k < H; ++k) {
            const double i = g4[k];
            const double f = g4[H + k];
            const double g = g4[2 * H + k];
            const double o = g4[3 * H + k];
            const double d_o = dht[k] * tc[k];
            const double d_c = dc_carry[k] + dht[k] * o * (1.0 - tc[k] * tc[k]);
            const double d_i = d_c * g;
            const double d_f = d_c * c_prev[k];
            const double d_g = d_c * i;
            dc_carry[k] = d_c * f;
            dz[k] = d_i * i * (1.0 - i);
            dz[H + k] = d_f * f * (1.0 - f);
            dz[2 * H + k] = d_g * (1.0 - g * g);
            dz[3 * H + k] = d_o * o * (1.0 - o);
          }
        }

        linalg::outer_add(lg.w_in, dz.data(), x.data());
        linalg::outer_add(lg.w_rec, dz.data(), h_prev.data());
        for (std::size_t r = 0; r < dz.size(); ++r) lg.bias.data[r] += dz[r];

        std::fill(dh_carry.begin(), dh_carry.end(), 0.0);
        linalg::matvec_transpose_add(lp.w_rec, dz.data(), dh_carry.data());
        linalg::matvec_transpose_add(lp.w_in, dz.data(), dx[t].data());
      }
    }

    if (l > 0) {
      for (std::size_t t = 0; t < T; ++t)
        for (std::size_t dir = 0; dir < dirs; ++dir)
          for (std::size_t k = 0; k < H; ++k)
            dh[l - 1][dir][t][k] += dx[t][dir * H + k];
    }
  }
  return loss;
}

double global_norm(const ModelParams& grads) {
  double total = 0.0;
  grads.for_each_tensor([&total](const linalg::Tensor& t) {
    total += linalg::sum_squares(t.data);
  });
  return std::sqrt(total);
}

void clip_by_global_norm(ModelParams& grads, double max_norm) {
  const double norm = global_norm(grads);
  if (norm <= max_norm || norm == 0.0) return;
  const double scale = max_norm / norm;
  grads.for_each_tensor([scale](linalg::Tensor& t) {
    for (auto& v : t.data) v *= scale;
  });
}

AdamState AdamState::create(const ModelParams& shape, double lr) {
  AdamState s;
  s.m = ModelParams::zeros_like(shape);
  s.v = ModelParams::zeros_like(shape);
  s.lr = lr;
  return s;
}

namespace {

template <typename F>
void zip_tensors(ModelParams& a, const ModelParams& b, ModelParams& c,
                 ModelParams& d, F f) {
  for (std::size_t l = 0; l < a.layers.size(); ++l) {
    f(a.layers[l].w_in, b.layers[l].w_in, c.layers[l].w_in, d.layers[l].w_in);
    f(a.layers[l].w_rec, b.layers[l].w_rec, c.layers[l].w_rec,
      d.layers[l].w_rec);
    f(a.layers[l].bias, b.layers[l].bias, c.layers[l].bias, d.layers[l].bias);
  }
  f(a.proj_w, b.proj_w, c.proj_w, d.proj_w);
  f(a.proj_b, b.proj_b, c.proj_b, d.proj_b);
}

}  // namespace

void adam_update(ModelParams& params, const ModelParams& grads,
                 AdamState& state) {
  ++state.t;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  const double lr = state.lr, b1 = state.beta1, b2 = state.beta2,
               eps = state.eps;
  zip_tensors(params, grads, state.m, state.v,
              [&](linalg::Tensor& p, const linalg::Tensor& g, linalg::Tensor& m,
                  linalg::Tensor& v) {
                for (std::size_t i = 0; i < p.data.size(); ++i) {
                  m.data[i] = b1 * m.data[i] + (1.0 - b1) * g.data[i];
                  v.data[i] =
                      b2 * v.data[i] + (1.0 - b2) * g.data[i] * g.data[i];
                  const double mhat = m.data[i] / c1;
                  const double vhat = v.data[i] / c2;
                  p.data[i] -= lr * mhat / (std::sqrt(vhat) + eps);
                }
              });
}

AdagradState AdagradState::create(const ModelParams& shape, double lr) {
  AdagradState s;
  s.accum = ModelParams::zeros_like(shape);
  s.lr = lr;
  return s;
}

void adagrad_update(ModelParams& params, const ModelParams& grads,
                    AdagradState& state) {
  ModelParams dummy = ModelParams::zeros_like(grads);
  const double lr = state.lr, eps = state.eps;
  zip_tensors(params, grads, state.accum, dummy,
              [&](linalg::Tensor& p, const linalg::Tensor& g,
                  linalg::Tensor& acc, linalg::Tensor&) {
                for (std::size_t i = 0; i < p.data.size(); ++i) {
                  acc.data[i] += g.data[i] * g.data[i];
                  p.data[i] -=
                      lr * g.data[i] / (std::sqrt(acc.data[i]) + eps);
                }
              });
}

TrainTrace train_model(const SequenceModelConfig& config, ModelParams& params,
                       const std::vector<TrainSample>& samples,
                       const TrainOptions& options) {
  if (samples.empty()) throw TrainingError("train_model: no samples");
  for (const auto& s : samples) {
    if (s.inputs.empty()) throw TrainingError("train_model: empty sample");
    const std::size_t want =
        config.output_mode == OutputMode::kPerStep ? s.inputs.size() : 1;
    if (s.targets.size() != want)
      throw TrainingError("train_model: target count mismatch");
    for (std::size_t t : s.targets)
      if (t >= config.output_dim)
        throw TrainingError("train_model: target outside output range");
  }

  Rng rng(options.seed);
  AdamState adam = AdamState::create(params, options.lr);
  ModelParams grads = ModelParams::zeros_like(params);

  std::vector<std::size_t> order(samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  TrainTrace trace;
  double best_monitored = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;

  auto mean_loss = [&config, &params](const std::vector<TrainSample>& set) {
    double total = 0.0;
    for (const auto& s : set) {
      auto pass = forward(config, params, s.inputs);
      for (std::size_t i = 0; i < pass.scores.size(); ++i)
        total += cross_entropy(softmax(pass.scores[i]), s.targets[i]);
    }
    return total / static_cast<double>(set.size());
  };

  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (const std::size_t idx : order) {
      const auto& sample = samples[idx];
      auto pass = forward(config, params, sample.inputs);
      grads.set_zero();
      epoch_loss += backward(config, params, pass, sample.targets, grads);
      clip_by_global_norm(grads, options.clip_norm);
      adam_update(params, grads, adam);
    }
    trace.epoch_loss.push_back(epoch_loss /
                               static_cast<double>(samples.size()));

    double monitored = trace.epoch_loss.back();
    if (options.validation && !options.validation->empty()) {
      trace.validation_loss.push_back(mean_loss(*options.validation));
      monitored = trace.validation_loss.back();
    }
    if (options.halve_on_plateau) {
      if (monitored < best_monitored - 1e-9) {
        best_monitored = monitored;
        since_best = 0;
      } else if (++since_best >= options.patience) {
        adam.lr /= 2.0;
        since_best = 0;
      }
    }
  }
  return trace;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  json cfg;
  cfg["cell"] = cell_name(ckpt.config.cell);
  cfg["layers"] = ckpt.config.layers;
  cfg["hidden"] = ckpt.config.hidden;
  cfg["bidirectional"] = ckpt.config.bidirectional;
  cfg["input_dim"] = ckpt.config.input_dim;
  cfg["output_dim"] = ckpt.config.output_dim;
  cfg["output_mode"] = output_mode_name(ckpt.config.output_mode);
  cfg["seed"] = ckpt.config.seed;

  json layers = json::array();
  for (const auto& l : ckpt.params.layers)
    layers.push_back(json{{"w_in", tensor_to_json(l.w_in)},
                          {"w_rec", tensor_to_json(l.w_rec)},
                          {"bias", tensor_to_json(l.bias)}});

  json j;
  j["format_version"] = 1;
  j["config"] = cfg;
  j["params"] = json{{"layers", layers},
                     {"proj_w", tensor_to_json(ckpt.params.proj_w)},
                     {"proj_b", tensor_to_json(ckpt.params.proj_b)}};
  j["vocab_fingerprint"] = ckpt.vocab_fingerprint;
  j["labels"] = ckpt.labels;

  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  out << j.dump() << '\n';
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }

  Checkpoint ckpt;
  try {
    if (j.at("format_version").get<int>() != 1)
      throw ConfigError(path + ": unsupported checkpoint format version");
    const json& cfg = j.at("config");
    ckpt.config.cell = cell_from_name(cfg.at("cell").get<std::string>());
    ckpt.config.layers = cfg.at("layers").get<std::size_t>();
    ckpt.config.hidden = cfg.at("hidden").get<std::size_t>();
    ckpt.config.bidirectional = cfg.at("bidirectional").get<bool>();
    ckpt.config.input_dim = cfg.at("input_dim").get<std::size_t>();
    ckpt.config.output_dim = cfg.at("output_dim").get<std::size_t>();
    ckpt.config.output_mode =
        output_mode_from_name(cfg.at("output_mode").get<std::string>());
    ckpt.config.seed = cfg.at("seed").get<std::uint64_t>();

    const json& params = j.at("params");
    for (const auto& l : params.at("layers"))
      ckpt.params.layers.push_back({tensor_from_json(l.at("w_in")),
                                    tensor_from_json(l.at("w_rec")),
                                    tensor_from_json(l.at("bias"))});
    ckpt.params.proj_w = tensor_from_json(params.at("proj_w"));
    ckpt.params.proj_b = tensor_from_json(params.at("proj_b"));
    ckpt.vocab_fingerprint = j.at("vocab_fingerprint").get<std::string>();
    ckpt.labels = j.at("labels").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }

  // Shape audit against the stored config.
  const auto& cfg = ckpt.config;
  cfg.validate();
  const std::size_t gate_rows = cfg.cell == Cell::kLstm ? 4 : 1;
  if (ckpt.params.layers.size() != cfg.layers * cfg.directions())
    throw ConfigError(path + ": layer count does not match config");
  for (std::size_t l = 0; l < cfg.layers; ++l)
    for (std::size_t dir = 0; dir < cfg.directions(); ++dir) {
      const auto& lp = ckpt.params.layers[l * cfg.directions() + dir];
      const std::size_t in = cfg.layer_input_dim(l);
      if (lp.w_in.rows != gate_rows * cfg.hidden || lp.w_in.cols != in ||
          lp.w_rec.rows != gate_rows * cfg.hidden ||
          lp.w_rec.cols != cfg.hidden ||
          lp.bias.rows != gate_rows * cfg.hidden || lp.bias.cols != 1)
        throw ConfigError(path + ": tensor shape mismatch in layer " +
                          std::to_string(l));
    }
  if (ckpt.params.proj_w.rows != cfg.output_dim ||
      ckpt.params.proj_w.cols != cfg.top_dim() ||
      ckpt.params.proj_b.rows != cfg.output_dim ||
      ckpt.params.proj_b.cols != 1)
    throw ConfigError(path + ": projection shape mismatch");

  ckpt.params.for_each_tensor([&path](const linalg::Tensor& t) {
    for (double v : t.data)
      if (!std::isfinite(v))
        throw ConfigError(path + ": non-finite parameter value");
  });
  return ckpt;
}

}  // namespace net
}  // namespace robonlu
