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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "robonlu/embed.hpp"
#include "robonlu/error.hpp"

using namespace robonlu;
using namespace robonlu::embed;

namespace {

using Corpus = std::vector<std::vector<std::string>>;

Corpus repeat(const std::vector<std::string>& sentence, std::size_t n) {
  return Corpus(n, sentence);
}

}  // namespace

TEST_CASE("build_vocab keeps the most frequent words plus UNK") {
  const auto v = Vocabulary::build({{"a", "a", "b"}}, 1);
  REQUIRE(v.size() == 2);
  CHECK(v.word(0) == "a");
  CHECK(v.word(1) == kUnkToken);
  CHECK(v.unk_id() == 1);
  CHECK(v.id("b") == v.unk_id());
}

TEST_CASE("build_vocab breaks count ties lexicographically") {
  const auto v = Vocabulary::build({{"b", "a"}}, 1);
  CHECK(v.word(0) == "a");
}

TEST_CASE("build_vocab keeps everything when max_size is large") {
  const auto v = Vocabulary::build({{"c", "b", "a"}}, 100);
  CHECK(v.size() == 4);  // three words + UNK
  CHECK(v.contains("a"));
  CHECK(v.contains("b"));
  CHECK(v.contains("c"));
}

TEST_CASE("empty stream yields a vocabulary with only UNK") {
  const auto v = Vocabulary::build({}, 5);
  CHECK(v.size() == 1);
  CHECK(v.word(0) == kUnkToken);
}

TEST_CASE("one_hot basis vectors") {
  CHECK(one_hot(3, 5) == std::vector<double>{0, 0, 0, 1, 0});
  CHECK(one_hot(0, 1) == std::vector<double>{1});
  CHECK_THROWS_AS(one_hot(5, 5), ArgumentError);
  double sum = 0;
  for (double x : one_hot(7, 20)) sum += x;
  CHECK(sum == 1.0);
}

TEST_CASE("one-hot embedding rows are exact basis vectors") {
  const auto v = Vocabulary::build({{"a", "b", "c"}}, 10);
  const auto e = one_hot_embedding(v);
  CHECK(e.dim() == v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double sum = 0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      CHECK(e.vectors.at(i, k) == (i == k ? 1.0 : 0.0));
      sum += e.vectors.at(i, k);
    }
    CHECK(sum == 1.0);
  }
}

TEST_CASE("subsample keep probability") {
  const double t = 1e-5;
  CHECK(subsample_keep_prob(t, t) == doctest::Approx(1.0));
  CHECK(subsample_keep_prob(4 * t, t) == doctest::Approx(0.5));
  CHECK(subsample_keep_prob(t / 10, t) == 1.0);
}

TEST_CASE("co-occurrence counts with distance weighting") {
  const auto v = Vocabulary::build({{"a", "b"}, {"a", "x", "b"}}, 10);
  SUBCASE("adjacent pair") {
    const auto x = build_cooc({{"a", "b"}}, v, 10);
    CHECK(x.get(v.id("a"), v.id("b")) == doctest::Approx(1.0));
    CHECK(x.get(v.id("b"), v.id("a")) == doctest::Approx(1.0));
  }
  SUBCASE("distance two weights 1/2") {
    const auto x = build_cooc({{"a", "x", "b"}}, v, 10);
    CHECK(x.get(v.id("a"), v.id("b")) == doctest::Approx(0.5));
  }
  SUBCASE("empty corpus") {
    const auto x = build_cooc({}, v, 10);
    CHECK(x.nonzeros() == 0);
  }
}

TEST_CASE("co-occurrence matrix is symmetric") {
  Rng rng(3);
  const std::vector<std::string> words = {"a", "b", "c", "d", "e"};
  Corpus corpus;
  for (int s = 0; s < 50; ++s) {
    std::vector<std::string> sentence;
    for (int k = 0; k < 8; ++k) sentence.push_back(rng.pick(words));
    corpus.push_back(sentence);
  }
  const auto v = Vocabulary::build(corpus, 10);
  const auto x = build_cooc(corpus, v, 10);
  for (const auto& e : x.sorted_entries())
    CHECK(x.get(e.col, e.row) == doctest::Approx(e.value));
}

TEST_CASE("glove weighting function") {
  CHECK(glove_weight(100.0) == 1.0);   // cap boundary
  CHECK(glove_weight(50.0) == doctest::Approx(0.5946).epsilon(1e-4 / 0.5946));
  CHECK(glove_weight(200.0) == 1.0);
  // Monotone non-decreasing, capped at 1 beyond x_max.
  double prev = 0.0;
  for (double x = 1.0; x <= 300.0; x += 1.0) {
    const double w = glove_weight(x);
    CHECK(w >= prev);
    if (x >= 100.0) CHECK(w == 1.0);
    prev = w;
  }
}

TEST_CASE("skip-gram training loss decreases on a toy corpus") {
  const auto corpus = repeat({"go", "to", "kitchen"}, 500);
  const auto vocab = Vocabulary::build(corpus, 10);
  SkipgramConfig cfg;
  cfg.dim = 16;
  cfg.epochs = 5;
  cfg.seed = 5;
  cfg.subsample_t = 0.5;  // keep the whole toy corpus
  TrainTrace trace;
  const auto e = train_skipgram(corpus, vocab, cfg, &trace);

  const auto kitchen = e.embed_sentence({"kitchen"})[0];
  CHECK(cosine(kitchen, kitchen) == doctest::Approx(1.0));
  REQUIRE(trace.epoch_loss.size() == 5);
  CHECK(trace.epoch_loss.back() < trace.epoch_loss.front());
}

TEST_CASE("interchangeable words end up with similar vectors") {
  // "apple" and "pear" share identical context distributions.
  Corpus corpus;
  for (int i = 0; i < 300; ++i) {
    corpus.push_back({"the", "apple", "falls", "down"});
    corpus.push_back({"the", "pear", "falls", "down"});
    corpus.push_back({"robots", "like", "music"});
  }
  const auto vocab = Vocabulary::build(corpus, 20);
  SkipgramConfig cfg;
  cfg.dim = 12;
  cfg.epochs = 8;
  cfg.seed = 3;
  cfg.subsample_t = 0.5;
  const auto e = train_skipgram(corpus, vocab, cfg);

  auto vec = [&](const std::string& w) { return e.embed_sentence({w})[0]; };
  const double pair = cosine(vec("apple"), vec("pear"));
  double total = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < vocab.size(); ++i)
    for (std::size_t j = i + 1; j < vocab.size(); ++j) {
      total += cosine(e.embed_sentence({vocab.word(i)})[0],
                      e.embed_sentence({vocab.word(j)})[0]);
      ++count;
    }
  const double mean = total / count;
  INFO("pair " << pair << " mean " << mean);
  CHECK(pair > mean);
}

TEST_CASE("skip-gram rejects k = 0") {
  SkipgramConfig cfg;
  cfg.negatives = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("skip-gram is deterministic for a fixed seed") {
  const auto corpus = repeat({"go", "to", "the", "kitchen"}, 100);
  const auto vocab = Vocabulary::build(corpus, 10);
  SkipgramConfig cfg;
  cfg.dim = 8;
  cfg.epochs = 2;
  cfg.seed = 11;
  cfg.subsample_t = 0.5;
  const auto a = train_skipgram(corpus, vocab, cfg);
  const auto b = train_skipgram(corpus, vocab, cfg);
  CHECK(a.vectors.data == b.vectors.data);
}

TEST_CASE("glove solves the one-entry problem to log X within 0.05") {
  const auto vocab = Vocabulary::from_words({"a", "b", "<unk>"});
  CoocMatrix x;
  const double value = std::exp(1.0);  // log X = 1
  x.add(0, 1, value);

  GloveConfig cfg;
  cfg.dim = 2;
  cfg.epochs = 400;
  cfg.seed = 2;
  TrainTrace trace;
  train_glove(x, vocab, cfg, &trace);

  // loss = f/2 * diff^2 exactly, so the final diff falls out of the trace.
  const double f = glove_weight(value);
  const double diff = std::sqrt(2.0 * trace.epoch_loss.back() / f);
  INFO("remaining |prediction - log X| = " << diff);
  CHECK(diff <= 0.05);
}

TEST_CASE("glove loss trace decreases on a toy corpus") {
  Corpus corpus;
  for (int i = 0; i < 100; ++i) {
    corpus.push_back({"go", "to", "the", "kitchen"});
    corpus.push_back({"grab", "the", "coke"});
  }
  const auto vocab = Vocabulary::build(corpus, 20);
  const auto x = build_cooc(corpus, vocab, 10);
  GloveConfig cfg;
  cfg.dim = 8;
  cfg.epochs = 20;
  cfg.seed = 7;
  TrainTrace trace;
  train_glove(x, vocab, cfg, &trace);
  REQUIRE(trace.epoch_loss.size() == 20);
  CHECK(trace.epoch_loss.back() < trace.epoch_loss.front());
  // Non-increasing across any 5-epoch window.
  for (std::size_t i = 0; i + 4 < trace.epoch_loss.size(); ++i)
    CHECK(trace.epoch_loss[i + 4] <= trace.epoch_loss[i] + 1e-12);
}

TEST_CASE("glove is deterministic and rejects bad matrices") {
  const auto vocab = Vocabulary::from_words({"a", "b", "<unk>"});
  CoocMatrix x;
  x.add(0, 1, 2.0);
  x.add(1, 0, 2.0);
  GloveConfig cfg;
  cfg.dim = 4;
  cfg.epochs = 10;
  cfg.seed = 9;
  const auto a = train_glove(x, vocab, cfg);
  const auto b = train_glove(x, vocab, cfg);
  CHECK(a.vectors.data == b.vectors.data);

  CoocMatrix empty;
  CHECK_THROWS_AS(train_glove(empty, vocab, cfg), ValidationError);

  CoocMatrix bad;
  bad.add(0, 1, -1.0);
  CHECK_THROWS_AS(train_glove(bad, vocab, cfg), ValidationError);
}

TEST_CASE("embed_sentence looks rows up and maps OOV to UNK") {
  const auto vocab = Vocabulary::build({{"go", "to", "kitchen"}}, 10);
  const auto e = one_hot_embedding(vocab);

  const std::vector<std::string> words = {"go", "to", "kitchen"};
  const auto cols = e.embed_sentence(words);
  REQUIRE(cols.size() == 3);
  for (std::size_t t = 0; t < 3; ++t)
    CHECK(cols[t][vocab.id(words[t])] == 1.0);

  const auto oov = e.embed_sentence({"zeppelin"});
  CHECK(oov[0][vocab.unk_id()] == 1.0);

  CHECK(e.embed_sentence({}).empty());
}

TEST_CASE("embedding file round trip is exact") {
  const auto corpus = repeat({"go", "to", "the", "kitchen"}, 50);
  const auto vocab = Vocabulary::build(corpus, 10);
  SkipgramConfig cfg;
  cfg.dim = 6;
  cfg.epochs = 1;
  cfg.seed = 4;
  cfg.subsample_t = 0.5;
  const auto e = train_skipgram(corpus, vocab, cfg);

  const auto path =
      (std::filesystem::temp_directory_path() / "robonlu_emb.txt").string();
  save_embedding(e, path);
  const auto back = load_embedding(path);
  CHECK(back.vectors.rows == e.vectors.rows);
  CHECK(back.vectors.cols == e.vectors.cols);
  CHECK(back.vectors.data == e.vectors.data);
  CHECK(back.vocab.words() == e.vocab.words());
  std::remove(path.c_str());
}

TEST_CASE("embedding reader validates the header") {
  namespace fs = std::filesystem;
  const auto path = (fs::temp_directory_path() / "robonlu_bad_emb.txt").string();
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs("2 3\n<unk> 1 2 3\n", f);  // header promises two rows
    std::fclose(f);
  }
  CHECK_THROWS_AS(load_embedding(path), ParseError);
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs("1 3\n<unk> 1 2\n", f);  // row shorter than dim
    std::fclose(f);
  }
  CHECK_THROWS_AS(load_embedding(path), ParseError);
  std::remove(path.c_str());
}
