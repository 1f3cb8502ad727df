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

#ifndef ROBONLU_EMBED_HPP_
#define ROBONLU_EMBED_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "robonlu/linalg.hpp"
#include "robonlu/rng.hpp"

namespace robonlu {
namespace embed {

constexpr const char* kUnkToken = "<unk>";

class Vocabulary {
 public:
  Vocabulary() = default;

  // The max_size most frequent tokens (count desc, then lexicographic) plus
  // the UNK entry, which is always last.
  static Vocabulary build(const std::vector<std::vector<std::string>>& corpus,
                          std::size_t max_size);
  static Vocabulary from_words(std::vector<std::string> words,
                               std::map<std::string, std::size_t> counts = {});

  std::size_t size() const { return words_.size(); }
  std::size_t unk_id() const { return unk_id_; }
  const std::vector<std::string>& words() const { return words_; }
  const std::string& word(std::size_t id) const { return words_[id]; }

  // UNK id for out-of-vocabulary words.
  std::size_t id(const std::string& word) const;
  bool contains(const std::string& word) const;
  std::size_t count(const std::string& word) const;
  std::size_t total_count() const { return total_count_; }

  // FNV-1a over the word list; checkpoints store it so that a model is only
  // ever applied on top of the vocabulary it was trained with.
  std::string fingerprint() const;

  bool operator==(const Vocabulary& o) const { return words_ == o.words_; }

 private:
  std::vector<std::string> words_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, std::size_t> counts_;
  std::size_t unk_id_ = 0;
  std::size_t total_count_ = 0;
};

enum class Backend { kOneHot, kSkipgram, kGlove };
std::string backend_name(Backend b);
Backend backend_from_name(const std::string& name);

struct EmbeddingMatrix {
  Backend backend = Backend::kOneHot;
  Vocabulary vocab;
  linalg::Tensor vectors;  // |V| x dim, row per word

  std::size_t dim() const { return vectors.cols; }

  // dim x T column-per-token layout; OOV tokens hit the UNK row.
  std::vector<std::vector<double>> embed_sentence(
      const std::vector<std::string>& tokens) const;
};

EmbeddingMatrix one_hot_embedding(const Vocabulary& vocab);

// Basis vector e_id of length size.
std::vector<double> one_hot(std::size_t id, std::size_t size);

// min(1, sqrt(t / f)) for corpus frequency f in (0, 1].
double subsample_keep_prob(double frequency, double threshold);

struct SkipgramConfig {
  std::size_t dim = 50;
  std::size_t negatives = 15;       // noise words per positive
  double subsample_t = 1e-5;
  std::size_t window = 5;           // total: center, two before, two after
  double lr = 0.01;                 // fixed Adam step size
  std::size_t epochs = 5;
  std::uint64_t seed = 1;

  void validate() const;
};

struct GloveConfig {
  std::size_t dim = 50;             // FBM3/GPSR scale; 300 at corpus scale
  std::size_t window = 10;          // symmetric
  double x_max = 100.0;
  double alpha = 0.75;
  double lr = 0.05;                 // AdaGrad step size
  std::size_t epochs = 25;
  std::uint64_t seed = 1;

  void validate() const;
};

// Sparse symmetric co-occurrence counts with 1/distance weighting.
class CoocMatrix {
 public:
  void add(std::size_t i, std::size_t j, double value);
  double get(std::size_t i, std::size_t j) const;
  std::size_t nonzeros() const { return cells_.size(); }

  struct Entry {
    std::size_t row, col;
    double value;
  };
  // Entries in (row, col) order, independent of insertion order.
  std::vector<Entry> sorted_entries() const;

 private:
  std::map<std::pair<std::size_t, std::size_t>, double> cells_;
};

CoocMatrix build_cooc(const std::vector<std::vector<std::string>>& corpus,
                      const Vocabulary& vocab, std::size_t window = 10);

// Capped weighting (x / x_max)^alpha.
double glove_weight(double x, double x_max = 100.0, double alpha = 0.75);

struct TrainTrace {
  std::vector<double> epoch_loss;
};

EmbeddingMatrix train_skipgram(
    const std::vector<std::vector<std::string>>& corpus,
    const Vocabulary& vocab, const SkipgramConfig& config,
    TrainTrace* trace = nullptr);

EmbeddingMatrix train_glove(const CoocMatrix& cooc, const Vocabulary& vocab,
                            const GloveConfig& config,
                            TrainTrace* trace = nullptr);

// Text format: header "<V> <dim>" then one "<word> <v1> ... <vdim>" line per
// word. Doubles are printed with enough digits to round-trip exactly.
void save_embedding(const EmbeddingMatrix& embedding, const std::string& path);
EmbeddingMatrix load_embedding(const std::string& path);

double cosine(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace embed
}  // namespace robonlu

#endif  // ROBONLU_EMBED_HPP_
