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

#include "robonlu/embed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "robonlu/error.hpp"

namespace robonlu {
namespace embed {

namespace {

constexpr double kLogFloor = 1e-12;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Lazy per-row Adam for the two embedding tables: moments live per row and
// the bias-correction step counter is global, incremented once per update
// event.
struct RowAdam {
  linalg::Tensor m, v;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

  RowAdam(std::size_t rows, std::size_t cols) : m(rows, cols), v(rows, cols) {}

  void update(linalg::Tensor& params, std::size_t row, const double* grad,
              double lr, std::uint64_t t) {
    double* p = params.row(row);
    double* mr = m.row(row);
    double* vr = v.row(row);
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    for (std::size_t k = 0; k < params.cols; ++k) {
      mr[k] = beta1 * mr[k] + (1.0 - beta1) * grad[k];
      vr[k] = beta2 * vr[k] + (1.0 - beta2) * grad[k] * grad[k];
      const double mhat = mr[k] / c1;
      const double vhat = vr[k] / c2;
      p[k] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
  }
};

// Cumulative unigram^(3/4) table sampled by binary search.
struct NoiseSampler {
  std::vector<double> cumulative;

  NoiseSampler(const Vocabulary& vocab, double power) {
    cumulative.resize(vocab.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      total += std::pow(static_cast<double>(vocab.count(vocab.word(i))), power);
      cumulative[i] = total;
    }
    if (total <= 0.0)
      throw ValidationError("skip-gram: vocabulary has no counted words");
  }

  std::size_t sample(Rng& rng) const {
    const double u = rng.uniform() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    return static_cast<std::size_t>(it - cumulative.begin());
  }
};

}  // namespace

Vocabulary Vocabulary::build(
    const std::vector<std::vector<std::string>>& corpus, std::size_t max_size) {
  if (max_size == 0) throw ArgumentError("build_vocab: max_size must be >= 1");
  std::map<std::string, std::size_t> counts;
  std::size_t total = 0;
  for (const auto& sentence : corpus) {
    for (const auto& tok : sentence) {
      ++counts[tok];
      ++total;
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(),
                                                          counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > max_size) ranked.resize(max_size);

  Vocabulary v;
  for (const auto& [word, count] : ranked) {
    v.index_[word] = v.words_.size();
    v.words_.push_back(word);
    v.counts_[word] = count;
  }
  v.unk_id_ = v.words_.size();
  v.index_[kUnkToken] = v.unk_id_;
  v.words_.push_back(kUnkToken);
  v.total_count_ = total;
  return v;
}

Vocabulary Vocabulary::from_words(std::vector<std::string> words,
                                  std::map<std::string, std::size_t> counts) {
  Vocabulary v;
  v.words_ = std::move(words);
  v.counts_ = std::move(counts);
  bool has_unk = false;
  for (std::size_t i = 0; i < v.words_.size(); ++i) {
    v.index_[v.words_[i]] = i;
    if (v.words_[i] == kUnkToken) {
      v.unk_id_ = i;
      has_unk = true;
    }
  }
  if (!has_unk)
    throw ValidationError("vocabulary is missing the UNK entry");
  for (const auto& [w, c] : v.counts_) v.total_count_ += c;
  return v;
}

std::size_t Vocabulary::id(const std::string& word) const {
  auto it = index_.find(word);
  return it == index_.end() ? unk_id_ : it->second;
}

bool Vocabulary::contains(const std::string& word) const {
  return index_.count(word) != 0;
}

std::size_t Vocabulary::count(const std::string& word) const {
  auto it = counts_.find(word);
  return it == counts_.end() ? 0 : it->second;
}

std::string Vocabulary::fingerprint() const {
  std::uint64_t h = 1469598103934665603ull;  // FNV offset basis
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 1099511628211ull;
  };
  for (const auto& w : words_) {
    for (unsigned char c : w) mix(c);
    mix('\n');
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

std::string backend_name(Backend b) {
  switch (b) {
    case Backend::kOneHot: return "onehot";
    case Backend::kSkipgram: return "skipgram";
    case Backend::kGlove: return "glove";
  }
  return "onehot";
}

Backend backend_from_name(const std::string& name) {
  if (name == "onehot") return Backend::kOneHot;
  if (name == "skipgram") return Backend::kSkipgram;
  if (name == "glove") return Backend::kGlove;
  throw ArgumentError("unknown embedding backend: " + name);
}

std::vector<std::vector<double>> EmbeddingMatrix::embed_sentence(
    const std::vector<std::string>& tokens) const {
  std::vector<std::vector<double>> cols;
  cols.reserve(tokens.size());
  for (const auto& tok : tokens) {
    const std::size_t row = vocab.id(tok);
    cols.emplace_back(vectors.row(row), vectors.row(row) + vectors.cols);
  }
  return cols;
}

EmbeddingMatrix one_hot_embedding(const Vocabulary& vocab) {
  EmbeddingMatrix e;
  e.backend = Backend::kOneHot;
  e.vocab = vocab;
  e.vectors = linalg::Tensor(vocab.size(), vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) e.vectors.at(i, i) = 1.0;
  return e;
}

std::vector<double> one_hot(std::size_t id, std::size_t size) {
  if (id >= size)
    throw ArgumentError("one_hot: id " + std::to_string(id) +
                        " out of range for size " + std::to_string(size));
  std::vector<double> v(size, 0.0);
  v[id] = 1.0;
  return v;
}

double subsample_keep_prob(double frequency, double threshold) {
  if (frequency <= 0.0) return 1.0;
  return std::min(1.0, std::sqrt(threshold / frequency));
}

void SkipgramConfig::validate() const {
  if (dim < 1) throw ValidationError("skip-gram config: dim must be >= 1");
  if (negatives < 1)
    throw ValidationError("skip-gram config: k must be >= 1");
  if (!(subsample_t > 0.0 && subsample_t < 1.0))
    throw ValidationError("skip-gram config: threshold must be in (0, 1)");
}

void GloveConfig::validate() const {
  if (dim < 1) throw ValidationError("glove config: dim must be >= 1");
  if (!(x_max > 0.0)) throw ValidationError("glove config: x_max must be > 0");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw ValidationError("glove config: alpha must be in (0, 1]");
}

void CoocMatrix::add(std::size_t i, std::size_t j, double value) {
  cells_[{i, j}] += value;
}

double CoocMatrix::get(std::size_t i, std::size_t j) const {
  auto it = cells_.find({i, j});
  return it == cells_.end() ? 0.0 : it->second;
}

std::vector<CoocMatrix::Entry> CoocMatrix::sorted_entries() const {
  std::vector<Entry> out;
  out.reserve(cells_.size());
  for (const auto& [key, value] : cells_)
    out.push_back({key.first, key.second, value});
  return out;
}

CoocMatrix build_cooc(const std::vector<std::vector<std::string>>& corpus,
                      const Vocabulary& vocab, std::size_t window) {
  CoocMatrix x;
  for (const auto& sentence : corpus) {
    std::vector<std::size_t> ids;
    ids.reserve(sentence.size());
    for (const auto& tok : sentence) ids.push_back(vocab.id(tok));
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t d = 1; d <= window && d <= i; ++d) {
        const std::size_t j = i - d;
        const double w = 1.0 / static_cast<double>(d);
        x.add(ids[i], ids[j], w);
        x.add(ids[j], ids[i], w);
      }
    }
  }
  return x;
}

double glove_weight(double x, double x_max, double alpha) {
  if (x >= x_max) return 1.0;
  return std::pow(x / x_max, alpha);
}

EmbeddingMatrix train_skipgram(
    const std::vector<std::vector<std::string>>& corpus,
    const Vocabulary& vocab, const SkipgramConfig& config, TrainTrace* trace) {
  config.validate();
  if (corpus.empty()) throw ValidationError("skip-gram: empty corpus");
  if (vocab.size() < 2) throw ValidationError("skip-gram: vocabulary too small");

  const std::size_t V = vocab.size();
  const std::size_t D = config.dim;
  const std::size_t half = (config.window - 1) / 2;
  const double total = static_cast<double>(
      std::max<std::size_t>(1, vocab.total_count()));

  Rng rng(config.seed);
  linalg::Tensor center(V, D);   // returned vectors
  linalg::Tensor context(V, D);  // zero-initialized, word2vec style
  for (auto& w : center.data) w = rng.uniform(-0.5 / D, 0.5 / D);

  RowAdam center_opt(V, D), context_opt(V, D);
  NoiseSampler noise(vocab, 0.75);

  std::vector<double> keep_prob(V, 1.0);
  for (std::size_t i = 0; i < V; ++i) {
    const double f = static_cast<double>(vocab.count(vocab.word(i))) / total;
    keep_prob[i] = subsample_keep_prob(f, config.subsample_t);
  }

  std::uint64_t step = 0;
  std::vector<double> grad_center(D), grad_context(D);
  if (trace) trace->epoch_loss.clear();

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    double loss = 0.0;
    std::uint64_t events = 0;

    for (const auto& sentence : corpus) {
      // Subsample first; the window slides over the survivors.
      std::vector<std::size_t> survivors;
      survivors.reserve(sentence.size());
      for (const auto& tok : sentence) {
        const std::size_t id = vocab.id(tok);
        if (keep_prob[id] >= 1.0 || rng.uniform() < keep_prob[id])
          survivors.push_back(id);
      }

      for (std::size_t c = 0; c < survivors.size(); ++c) {
        const std::size_t center_id = survivors[c];
        const std::size_t lo = c >= half ? c - half : 0;
        const std::size_t hi = std::min(survivors.size(), c + half + 1);
        for (std::size_t o = lo; o < hi; ++o) {
          if (o == c) continue;
          const std::size_t context_id = survivors[o];
          for (std::size_t n = 0; n <= config.negatives; ++n) {
            std::size_t target;
            double label;
            if (n == 0) {
              target = context_id;
              label = 1.0;
            } else {
              target = noise.sample(rng);
              if (target == context_id) continue;
              label = 0.0;
            }
            const double score = linalg::dot(center.row(center_id),
                                             context.row(target), D);
            const double p = sigmoid(score);
            loss += -std::log(std::max(label > 0.5 ? p : 1.0 - p, kLogFloor));
            ++events;
            const double g = p - label;
            for (std::size_t k = 0; k < D; ++k) {
              grad_center[k] = g * context.at(target, k);
              grad_context[k] = g * center.at(center_id, k);
            }
            ++step;
            center_opt.update(center, center_id, grad_center.data(),
                              config.lr, step);
            context_opt.update(context, target, grad_context.data(),
                               config.lr, step);
          }
        }
      }
    }
    if (trace)
      trace->epoch_loss.push_back(events ? loss / static_cast<double>(events)
                                         : 0.0);
  }

  EmbeddingMatrix e;
  e.backend = Backend::kSkipgram;
  e.vocab = vocab;
  e.vectors = std::move(center);
  return e;
}

EmbeddingMatrix train_glove(const CoocMatrix& cooc, const Vocabulary& vocab,
                            const GloveConfig& config, TrainTrace* trace) {
  config.validate();
  auto entries = cooc.sorted_entries();
  if (entries.empty()) throw ValidationError("glove: empty co-occurrence matrix");
  for (const auto& e : entries) {
    if (!(e.value > 0.0))
      throw ValidationError("glove: nonpositive co-occurrence count at (" +
                            std::to_string(e.row) + ", " +
                            std::to_string(e.col) + ")");
    if (e.row >= vocab.size() || e.col >= vocab.size())
      throw ValidationError("glove: entry outside the vocabulary");
  }

  const std::size_t V = vocab.size();
  const std::size_t D = config.dim;
  Rng rng(config.seed);

  linalg::Tensor w(V, D), wt(V, D);
  std::vector<double> b(V, 0.0), bt(V, 0.0);
  for (auto& x : w.data) x = rng.uniform(-0.5 / D, 0.5 / D);
  for (auto& x : wt.data) x = rng.uniform(-0.5 / D, 0.5 / D);

  linalg::Tensor acc_w(V, D), acc_wt(V, D);
  std::vector<double> acc_b(V, 0.0), acc_bt(V, 0.0);
  const double eps = 1e-8;

  std::vector<std::size_t> order(entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  if (trace) trace->epoch_loss.clear();
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double loss = 0.0;
    for (const std::size_t idx : order) {
      const auto& e = entries[idx];
      const std::size_t i = e.row, j = e.col;
      const double f = glove_weight(e.value, config.x_max, config.alpha);
      const double diff =
          linalg::dot(w.row(i), wt.row(j), D) + b[i] + bt[j] - std::log(e.value);
      loss += 0.5 * f * diff * diff;
      const double g = f * diff;

      double* wi = w.row(i);
      double* wtj = wt.row(j);
      double* awi = acc_w.row(i);
      double* awtj = acc_wt.row(j);
      for (std::size_t k = 0; k < D; ++k) {
        const double gw = g * wtj[k];
        const double gwt = g * wi[k];
        awi[k] += gw * gw;
        awtj[k] += gwt * gwt;
        wi[k] -= config.lr * gw / (std::sqrt(awi[k]) + eps);
        wtj[k] -= config.lr * gwt / (std::sqrt(awtj[k]) + eps);
      }
      acc_b[i] += g * g;
      acc_bt[j] += g * g;
      b[i] -= config.lr * g / (std::sqrt(acc_b[i]) + eps);
      bt[j] -= config.lr * g / (std::sqrt(acc_bt[j]) + eps);
    }
    if (trace)
      trace->epoch_loss.push_back(loss / static_cast<double>(entries.size()));
  }

  EmbeddingMatrix out;
  out.backend = Backend::kGlove;
  out.vocab = vocab;
  out.vectors = linalg::Tensor(V, D);
  for (std::size_t i = 0; i < V; ++i)
    for (std::size_t k = 0; k < D; ++k)
      out.vectors.at(i, k) = w.at(i, k) + wt.at(i, k);
  return out;
}

void save_embedding(const EmbeddingMatrix& embedding, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  const auto& vec = embedding.vectors;
  out << vec.rows << ' ' << vec.cols << '\n';
  char buf[40];
  for (std::size_t i = 0; i < vec.rows; ++i) {
    out << embedding.vocab.word(i);
    for (std::size_t k = 0; k < vec.cols; ++k) {
      if (!std::isfinite(vec.at(i, k)))
        throw ValidationError("embedding has a non-finite entry");
      std::snprintf(buf, sizeof(buf), "%.17g", vec.at(i, k));
      out << ' ' << buf;
    }
    out << '\n';
  }
}

EmbeddingMatrix load_embedding(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::string header;
  if (!std::getline(in, header)) throw ParseError(path + ": empty file");
  std::istringstream hs(header);
  std::size_t v = 0, d = 0;
  if (!(hs >> v >> d) || v == 0 || d == 0)
    throw ParseError(path + ": malformed header '" + header + "'");

  EmbeddingMatrix e;
  e.vectors = linalg::Tensor(v, d);
  std::vector<std::string> words;
  words.reserve(v);
  std::string line;
  for (std::size_t i = 0; i < v; ++i) {
    if (!std::getline(in, line))
      throw ParseError(path + ": header promises " + std::to_string(v) +
                       " rows, found " + std::to_string(i));
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word))
      throw ParseError(path + ":" + std::to_string(i + 2) + ": missing word");
    words.push_back(word);
    for (std::size_t k = 0; k < d; ++k) {
      double value;
      if (!(ls >> value))
        throw ParseError(path + ":" + std::to_string(i + 2) +
                         ": expected " + std::to_string(d) + " values");
      if (!std::isfinite(value))
        throw ParseError(path + ":" + std::to_string(i + 2) +
                         ": non-finite value");
      e.vectors.at(i, k) = value;
    }
    double extra;
    if (ls >> extra)
      throw ParseError(path + ":" + std::to_string(i + 2) +
                       ": more values than the header dimension");
  }
  e.vocab = Vocabulary::from_words(std::move(words));

  bool identity = v == d;
  for (std::size_t i = 0; identity && i < v; ++i)
    for (std::size_t k = 0; k < d; ++k)
      if (e.vectors.at(i, k) != (i == k ? 1.0 : 0.0)) {
        identity = false;
        break;
      }
  e.backend = identity ? Backend::kOneHot : Backend::kGlove;
  return e;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) return 0.0;
  const double num = linalg::dot(a.data(), b.data(), a.size());
  const double na = std::sqrt(linalg::sum_squares(a));
  const double nb = std::sqrt(linalg::sum_squares(b));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return num / (na * nb);
}

}  // namespace embed
}  // namespace robonlu
