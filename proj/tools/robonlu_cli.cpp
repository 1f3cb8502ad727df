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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "robonlu/action.hpp"
#include "robonlu/corpus.hpp"
#include "robonlu/embed.hpp"
#include "robonlu/error.hpp"
#include "robonlu/net.hpp"
#include "robonlu/pipeline.hpp"
#include "robonlu/slots.hpp"
#include "robonlu/splitter.hpp"

namespace {

using namespace robonlu;

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<std::vector<std::string>> corpus_sentences(
    const std::vector<std::string>& data_paths,
    const std::vector<std::string>& text_paths) {
  std::vector<std::vector<std::string>> sentences;
  for (const auto& path : data_paths) {
    const auto dataset = corpus::read_dataset(path);
    for (const auto& r : dataset.records) sentences.push_back(r.tokens);
  }
  for (const auto& path : text_paths) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::string line;
    while (std::getline(in, line)) {
      auto tokens = corpus::tokenize(line);
      if (!tokens.empty()) sentences.push_back(std::move(tokens));
    }
  }
  return sentences;
}

void cmd_gen(const std::string& schema_name, std::size_t n,
             std::uint64_t seed, const std::string& out_path,
             const std::string& split, std::size_t n_other,
             const std::string& action, bool instructions,
             std::size_t min_commands, std::size_t max_commands) {
  const auto schema = corpus::resolve_schema(schema_name);
  Rng rng(seed);
  if (instructions) {
    if (min_commands == 0 || max_commands < min_commands)
      throw ArgumentError("gen: bad command count range");
    std::vector<corpus::Instruction> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k =
          min_commands + rng.index(max_commands - min_commands + 1);
      out.push_back(corpus::generate_instruction(schema, k, rng));
    }
    corpus::write_instructions(out, out_path);
    std::cout << "wrote " << out.size() << " instructions to " << out_path
              << '\n';
    return;
  }
  corpus::Dataset dataset;
  dataset.schema_name = schema.name;
  dataset.split = split;
  for (std::size_t i = 0; i < n; ++i)
    dataset.records.push_back(corpus::generate_command(schema, action, rng));
  if (n_other > 0) {
    auto others = corpus::generate_other_commands(n_other, rng);
    dataset.records.insert(dataset.records.end(), others.begin(),
                           others.end());
  }
  corpus::write_dataset(dataset, out_path);
  std::cout << "wrote " << dataset.records.size() << " records to " << out_path
            << '\n';
}

void cmd_train_embed(const std::string& backend_name,
                     const std::vector<std::string>& data_paths,
                     const std::vector<std::string>& text_paths,
                     std::size_t dim, std::size_t epochs, std::uint64_t seed,
                     std::size_t max_vocab, double subsample,
                     const std::string& out_path) {
  const auto backend = embed::backend_from_name(backend_name);
  const auto sentences = corpus_sentences(data_paths, text_paths);
  if (sentences.empty()) throw ArgumentError("train-embed: empty corpus");
  const auto vocab = embed::Vocabulary::build(sentences, max_vocab);

  embed::EmbeddingMatrix result;
  embed::TrainTrace trace;
  switch (backend) {
    case embed::Backend::kOneHot:
      result = embed::one_hot_embedding(vocab);
      break;
    case embed::Backend::kSkipgram: {
      embed::SkipgramConfig cfg;
      cfg.dim = dim;
      cfg.epochs = epochs;
      cfg.seed = seed;
      cfg.subsample_t = subsample;
      result = embed::train_skipgram(sentences, vocab, cfg, &trace);
      break;
    }
    case embed::Backend::kGlove: {
      embed::GloveConfig cfg;
      cfg.dim = dim;
      cfg.epochs = epochs;
      cfg.seed = seed;
      const auto cooc = embed::build_cooc(sentences, vocab, cfg.window);
      result = embed::train_glove(cooc, vocab, cfg, &trace);
      break;
    }
  }
  embed::save_embedding(result, out_path);
  std::cout << "vocabulary " << vocab.size() << " words, dim " << result.dim()
            << ", wrote " << out_path << '\n';
  if (!trace.epoch_loss.empty())
    std::cout << "loss " << trace.epoch_loss.front() << " -> "
              << trace.epoch_loss.back() << " over "
              << trace.epoch_loss.size() << " epochs\n";
}

void cmd_train_action(const std::string& data_path,
                      const std::string& schema_name,
                      const std::string& embedding_path,
                      const std::string& arch, std::size_t epochs, double lr,
                      std::uint64_t seed, const std::string& out_path) {
  const auto schema = corpus::resolve_schema(schema_name);
  const auto dataset = corpus::read_dataset(data_path);
  corpus::validate_dataset(dataset, schema);
  const auto embedding = embed::load_embedding(embedding_path);

  corpus::Dataset in_set = dataset;
  std::erase_if(in_set.records, [](const corpus::TaggedSentence& r) {
    return r.action == corpus::kOtherAction;
  });

  net::TrainTrace trace;
  auto model =
      action::train_action(in_set, schema, net::parse_architecture(arch),
                           embedding, {epochs, lr, seed}, &trace);
  model.save(out_path);
  std::cout << "trained " << arch << " on " << in_set.records.size()
            << " records, loss " << trace.epoch_loss.front() << " -> "
            << trace.epoch_loss.back() << ", wrote " << out_path << '\n';
}

void cmd_train_slots(const std::string& data_path,
                     const std::string& schema_name,
                     const std::string& embedding_path, const std::string& arch,
                     std::size_t epochs, double lr, std::uint64_t seed,
                     int approach, const std::string& out_path,
                     const std::string& out_dir) {
  const auto schema = corpus::resolve_schema(schema_name);
  const auto dataset = corpus::read_dataset(data_path);
  corpus::validate_dataset(dataset, schema);
  const auto embedding = embed::load_embedding(embedding_path);
  const auto config = net::parse_architecture(arch);
  const action::TrainSettings settings{epochs, lr, seed};

  if (approach == 1) {
    if (out_path.empty()) throw ArgumentError("train-slots: --out required");
    auto model =
        slots::train_slot_model(dataset, schema, config, embedding, settings);
    model.save(out_path);
    std::cout << "trained shared slot model, wrote " << out_path << '\n';
  } else if (approach == 2) {
    if (out_dir.empty()) throw ArgumentError("train-slots: --out-dir required");
    std::filesystem::create_directories(out_dir);
    for (const auto& name : schema.action_names()) {
      auto model = slots::train_slot_model(dataset, schema, config, embedding,
                                           settings, name);
      const auto path =
          (std::filesystem::path(out_dir) / (name + ".json")).string();
      model.save(path);
      std::cout << "trained slot model for '" << name << "', wrote " << path
                << '\n';
    }
  } else {
    throw ArgumentError("train-slots: approach must be 1 or 2");
  }
}

void cmd_train_other(const std::string& in_set_path,
                     const std::string& other_path,
                     const std::string& embedding_path,
                     const std::string& action_model_path,
                     const std::string& out_path) {
  const auto embedding = embed::load_embedding(embedding_path);
  const auto model = action::ActionModel::load(action_model_path);

  auto max_scores = [&](const corpus::Dataset& d) {
    std::vector<double> out;
    out.reserve(d.records.size());
    for (const auto& r : d.records) {
      auto [label, scores] = action::predict_action(model, embedding, r.tokens);
      out.push_back(scores[action::argmax_lowest(scores)]);
    }
    return out;
  };
  const auto in_scores = max_scores(corpus::read_dataset(in_set_path));
  const auto other_scores = max_scores(corpus::read_dataset(other_path));
  const auto svm = action::train_other_svm(in_scores, other_scores);
  action::save_other_svm(svm, out_path);

  std::size_t correct = 0;
  for (double x : in_scores) correct += action::apply_other(svm, x);
  for (double x : other_scores) correct += !action::apply_other(svm, x);
  std::cout << "svm w=" << svm.w << " b=" << svm.b << " training accuracy "
            << static_cast<double>(correct) /
                   static_cast<double>(in_scores.size() + other_scores.size())
            << ", wrote " << out_path << '\n';
}

void print_report(const pipeline::EvalReport& report) {
  auto line = [](const char* task, const pipeline::TaskCounts& c,
                 double accuracy) {
    std::cout << task << " accuracy " << accuracy << " (tp=" << c.tp
              << " tn=" << c.tn << " fp=" << c.fp << " fn=" << c.fn << ")\n";
  };
  line("action    ", report.action, report.action_accuracy);
  line("slot_token", report.slot_token, report.slot_token_accuracy);
  line("frame     ", report.frame, report.frame_accuracy);
}

void cmd_eval(const std::string& config_path, const std::string& data_path,
              const std::string& instructions_path,
              const std::string& csv_path) {
  const auto config = pipeline::PipelineConfig::load(config_path);
  const auto pipe = pipeline::Pipeline::load(config);

  pipeline::EvalReport report;
  if (!instructions_path.empty()) {
    report = pipe.evaluate(corpus::read_instructions(instructions_path));
  } else if (!data_path.empty()) {
    report = pipe.evaluate(corpus::read_dataset(data_path));
  } else {
    throw ArgumentError("eval: need --data or --instructions");
  }
  print_report(report);

  if (!csv_path.empty()) {
    std::vector<pipeline::GridRow> rows;
    const std::string arch = "configured";
    const std::string backend = embed::backend_name(config.backend);
    rows.push_back({arch, backend, config.approach, "action",
                    report.action_accuracy, report.action, false, ""});
    rows.push_back({arch, backend, config.approach, "slot_token",
                    report.slot_token_accuracy, report.slot_token, false, ""});
    rows.push_back({arch, backend, config.approach, "frame",
                    report.frame_accuracy, report.frame, false, ""});
    pipeline::write_grid_csv(rows, csv_path);
    std::cout << "wrote " << csv_path << '\n';
  }
}

void cmd_grid(const std::string& schema_name, const std::string& archs,
              const std::string& embeddings, const std::string& approaches,
              std::uint64_t seed, std::size_t dataset_size,
              std::size_t other_size, std::size_t epochs, double lr,
              std::size_t embed_dim, std::size_t embed_epochs,
              const std::string& out_path) {
  pipeline::GridSpec spec;
  spec.schema = corpus::resolve_schema(schema_name);
  spec.architectures = split_csv(archs);
  for (const auto& b : split_csv(embeddings))
    spec.embeddings.push_back(embed::backend_from_name(b));
  for (const auto& a : split_csv(approaches))
    spec.approaches.push_back(std::stoi(a));
  spec.seed = seed;
  spec.dataset_size = dataset_size;
  spec.other_size = other_size;
  spec.epochs = epochs;
  spec.lr = lr;
  spec.embed_dim = embed_dim;
  spec.embed_epochs = embed_epochs;

  const auto rows = pipeline::run_experiment_grid(spec);
  if (out_path.empty())
    std::cout << pipeline::grid_csv(rows);
  else {
    pipeline::write_grid_csv(rows, out_path);
    std::cout << "wrote " << rows.size() << " rows to " << out_path << '\n';
  }
}

void cmd_parse(const std::string& config_path, const std::string& text) {
  const auto pipe =
      pipeline::Pipeline::load(pipeline::PipelineConfig::load(config_path));
  std::cout << pipeline::frames_to_json(pipe.understand(text)) << '\n';
}

void cmd_repl(const std::string& config_path) {
  const auto pipe =
      pipeline::Pipeline::load(pipeline::PipelineConfig::load(config_path));
  std::string line;
  while (std::getline(std::cin, line)) {
    if (corpus::tokenize(line).empty()) {
      std::cout << "[]\n";
      continue;
    }
    std::cout << pipeline::frames_to_json(pipe.understand(line)) << std::endl;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"natural language command understanding for service robots"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate an annotated dataset");
  std::string gen_schema = "gpsr", gen_out, gen_split = "train", gen_action;
  std::size_t gen_n = 100, gen_other = 0, gen_min = 1, gen_max = 3;
  std::uint64_t gen_seed = 1;
  bool gen_instructions = false;
  gen->add_option("--schema", gen_schema, "builtin name or schema file");
  gen->add_option("--n", gen_n, "number of records")->required();
  gen->add_option("--seed", gen_seed, "rng seed");
  gen->add_option("--out", gen_out, "output path")->required();
  gen->add_option("--split", gen_split, "split label stored in the file");
  gen->add_option("--other", gen_other, "append out-of-set commands");
  gen->add_option("--action", gen_action, "restrict to one action");
  gen->add_flag("--instructions", gen_instructions,
                "emit multi-command instructions instead of records");
  gen->add_option("--min-commands", gen_min, "instructions: min commands");
  gen->add_option("--max-commands", gen_max, "instructions: max commands");
  gen->callback([&] {
    cmd_gen(gen_schema, gen_n, gen_seed, gen_out, gen_split, gen_other,
            gen_action, gen_instructions, gen_min, gen_max);
  });

  // train-embed
  auto* temb = app.add_subcommand("train-embed", "train word vectors");
  std::string temb_backend = "glove", temb_out;
  std::vector<std::string> temb_data, temb_text;
  std::size_t temb_dim = 50, temb_epochs = 25, temb_vocab = 50000;
  std::uint64_t temb_seed = 1;
  double temb_subsample = 0.05;
  temb->add_option("--backend", temb_backend, "onehot | skipgram | glove");
  temb->add_option("--data", temb_data, "dataset files (tokens feed the corpus)")
      ->required();
  temb->add_option("--text", temb_text, "extra plain-text files");
  temb->add_option("--dim", temb_dim, "vector size");
  temb->add_option("--epochs", temb_epochs, "training epochs");
  temb->add_option("--seed", temb_seed, "rng seed");
  temb->add_option("--max-vocab", temb_vocab, "most frequent words kept");
  temb->add_option("--subsample", temb_subsample,
                   "skip-gram frequent-word threshold (1e-5 at corpus scale)");
  temb->add_option("--out", temb_out, "output path")->required();
  temb->callback([&] {
    cmd_train_embed(temb_backend, temb_data, temb_text, temb_dim, temb_epochs,
                    temb_seed, temb_vocab, temb_subsample, temb_out);
  });

  // train-action
  auto* tact = app.add_subcommand("train-action", "train the action classifier");
  std::string tact_data, tact_schema = "gpsr", tact_emb, tact_arch = "lstm-1x100",
              tact_out;
  std::size_t tact_epochs = 30;
  double tact_lr = 0.01;
  std::uint64_t tact_seed = 1;
  tact->add_option("--data", tact_data, "training dataset")->required();
  tact->add_option("--schema", tact_schema, "builtin name or schema file");
  tact->add_option("--embedding", tact_emb, "embedding file")->required();
  tact->add_option("--arch", tact_arch, "e.g. lstm-1x100, dblstm-2x250");
  tact->add_option("--epochs", tact_epochs, "training epochs");
  tact->add_option("--lr", tact_lr, "Adam learning rate");
  tact->add_option("--seed", tact_seed, "rng seed");
  tact->add_option("--out", tact_out, "checkpoint path")->required();
  tact->callback([&] {
    cmd_train_action(tact_data, tact_schema, tact_emb, tact_arch, tact_epochs,
                     tact_lr, tact_seed, tact_out);
  });

  // train-slots
  auto* tslt = app.add_subcommand("train-slots", "train IOB slot taggers");
  std::string tslt_data, tslt_schema = "gpsr", tslt_emb,
              tslt_arch = "lstm-1x100", tslt_out, tslt_out_dir;
  std::size_t tslt_epochs = 30;
  double tslt_lr = 0.01;
  std::uint64_t tslt_seed = 1;
  int tslt_approach = 1;
  tslt->add_option("--data", tslt_data, "training dataset")->required();
  tslt->add_option("--schema", tslt_schema, "builtin name or schema file");
  tslt->add_option("--embedding", tslt_emb, "embedding file")->required();
  tslt->add_option("--arch", tslt_arch, "e.g. lstm-1x100, dblstm-2x250");
  tslt->add_option("--epochs", tslt_epochs, "training epochs");
  tslt->add_option("--lr", tslt_lr, "Adam learning rate");
  tslt->add_option("--seed", tslt_seed, "rng seed");
  tslt->add_option("--approach", tslt_approach,
                   "1: shared model; 2: one model per action");
  tslt->add_option("--out", tslt_out, "checkpoint path (approach 1)");
  tslt->add_option("--out-dir", tslt_out_dir,
                   "checkpoint directory (approach 2)");
  tslt->callback([&] {
    cmd_train_slots(tslt_data, tslt_schema, tslt_emb, tslt_arch, tslt_epochs,
                    tslt_lr, tslt_seed, tslt_approach, tslt_out, tslt_out_dir);
  });

  // train-other
  auto* toth = app.add_subcommand("train-other",
                                  "fit the out-of-set confidence threshold");
  std::string toth_in, toth_other, toth_emb, toth_model, toth_out;
  toth->add_option("--in-set", toth_in, "held-out in-set dataset")->required();
  toth->add_option("--other", toth_other, "out-of-set dataset")->required();
  toth->add_option("--embedding", toth_emb, "embedding file")->required();
  toth->add_option("--action-model", toth_model, "action checkpoint")
      ->required();
  toth->add_option("--out", toth_out, "svm output path")->required();
  toth->callback([&] {
    cmd_train_other(toth_in, toth_other, toth_emb, toth_model, toth_out);
  });

  // eval
  auto* ev = app.add_subcommand("eval", "evaluate a configured pipeline");
  std::string ev_config, ev_data, ev_instructions, ev_csv;
  ev->add_option("--config", ev_config, "pipeline config")->required();
  ev->add_option("--data", ev_data, "dataset of single commands");
  ev->add_option("--instructions", ev_instructions,
                 "instructions file (exercises the splitter)");
  ev->add_option("--csv", ev_csv, "write counts as CSV");
  ev->callback([&] { cmd_eval(ev_config, ev_data, ev_instructions, ev_csv); });

  // grid
  auto* gr = app.add_subcommand("grid", "architecture/embedding comparison");
  std::string gr_schema = "gpsr", gr_arch = "rnn-1x100,lstm-1x100",
              gr_emb = "onehot,glove", gr_approaches = "1", gr_out;
  std::uint64_t gr_seed = 1;
  std::size_t gr_dataset = 1000, gr_other = 100, gr_epochs = 15,
              gr_embed_dim = 50, gr_embed_epochs = 20;
  double gr_lr = 0.01;
  gr->add_option("--schema", gr_schema, "builtin name or schema file");
  gr->add_option("--arch", gr_arch, "comma-separated architectures");
  gr->add_option("--embeddings", gr_emb, "comma-separated backends");
  gr->add_option("--approaches", gr_approaches, "comma-separated (1,2)");
  gr->add_option("--seed", gr_seed, "rng seed");
  gr->add_option("--dataset-size", gr_dataset, "records generated");
  gr->add_option("--other-size", gr_other, "out-of-set commands generated");
  gr->add_option("--epochs", gr_epochs, "training epochs per cell");
  gr->add_option("--lr", gr_lr, "Adam learning rate");
  gr->add_option("--embed-dim", gr_embed_dim, "embedding size");
  gr->add_option("--embed-epochs", gr_embed_epochs, "embedding epochs");
  gr->add_option("--out", gr_out, "CSV output path (stdout when omitted)");
  gr->callback([&] {
    cmd_grid(gr_schema, gr_arch, gr_emb, gr_approaches, gr_seed, gr_dataset,
             gr_other, gr_epochs, gr_lr, gr_embed_dim, gr_embed_epochs,
             gr_out);
  });

  // parse
  auto* pa = app.add_subcommand("parse", "parse one instruction to JSON");
  std::string pa_config, pa_text;
  pa->add_option("--config", pa_config, "pipeline config")->required();
  pa->add_option("text", pa_text, "instruction text")->required();
  pa->callback([&] { cmd_parse(pa_config, pa_text); });

  // repl
  auto* re = app.add_subcommand("repl", "read instructions, print frames");
  std::string re_config;
  re->add_option("--config", re_config, "pipeline config")->required();
  re->callback([&] { cmd_repl(re_config); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
