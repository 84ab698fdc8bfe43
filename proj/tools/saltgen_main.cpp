#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "salt/metrics.hpp"
#include "salt/ngram_lm.hpp"
#include "salt/task.hpp"
#include "salt/text.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<salt::Sentence> tokenize_lines(const std::vector<std::string>& lines) {
  std::vector<salt::Sentence> sentences;
  sentences.reserve(lines.size());
  for (const std::string& line : lines) sentences.push_back(salt::tokenize(line));
  return sentences;
}

int cmd_train_lm(const std::string& corpus_path, int order, int min_count,
                 const std::string& out_path) {
  salt::NGramModel model = [&] {
    // Input problems (missing file, bad order, empty corpus) are usage errors.
    try {
      return salt::NGramModel::train(salt::read_sentence_file(corpus_path), order,
                                     min_count);
    } catch (const std::runtime_error& e) {
      throw std::invalid_argument(e.what());
    }
  }();
  try {
    model.save(out_path);
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument(e.what());
  }
  std::cout << "tokens: " << model.trained_tokens() << '\n'
            << "vocab: " << model.vocab().size() << '\n'
            << "ngrams: " << model.distinct_ngrams() << '\n';
  return 0;
}

int cmd_generate(const std::string& task_name, const std::string& config_path,
                 const std::string& input_path, const std::string& out_path,
                 const std::string& trace_path, std::uint64_t seed, bool parallel) {
  salt::TaskKind task = salt::parse_task(task_name);
  salt::GenConfig cfg = salt::parse_gen_config(read_file(config_path));
  salt::TaskResources res = salt::load_resources(cfg, task);
  std::vector<std::string> lines = read_lines(input_path);

  std::ofstream out(out_path);
  if (!out) throw std::invalid_argument("cannot write " + out_path);
  std::ofstream trace;
  if (!trace_path.empty()) {
    trace.open(trace_path);
    if (!trace) throw std::invalid_argument("cannot write " + trace_path);
  }

  salt::GenerationOutcome outcome = salt::run_generation(
      cfg, task, res, lines, seed,
      parallel ? salt::BatchMode::kParallel : salt::BatchMode::kSerial);

  for (const salt::GenerationRecord& record : outcome.records) {
    nlohmann::ordered_json row;
    row["input"] = record.input;
    row["output"] = salt::detokenize(record.output);
    row["log_score"] = record.log_score;
    row["init_log_score"] = record.init_log_score;
    row["iterations"] = record.iterations;
    out << row.dump() << '\n';
  }
  if (trace.is_open()) {
    for (const salt::SearchTrace& steps : outcome.traces) {
      for (const salt::TraceStep& step : steps) {
        nlohmann::ordered_json row;
        row["step"] = step.step;
        row["op"] = step.op;
        row["accepted"] = step.accepted;
        row["log_score"] = step.log_score;
        row["temperature"] = step.temperature;
        row["candidate"] = salt::detokenize(step.candidate);
        trace << row.dump() << '\n';
      }
    }
  }
  return 0;
}

int cmd_evaluate(const std::string& inputs_path, const std::string& outputs_path,
                 const std::string& references_path, double alpha) {
  std::vector<salt::Sentence> inputs = tokenize_lines(read_lines(inputs_path));
  std::vector<salt::Sentence> outputs = tokenize_lines(read_lines(outputs_path));
  std::vector<salt::Sentence> references = tokenize_lines(read_lines(references_path));
  salt::CorpusEval eval = salt::corpus_eval(inputs, outputs, references, alpha);

  nlohmann::ordered_json row;
  row["bleu"] = eval.bleu;
  row["ibleu"] = eval.ibleu;
  row["n"] = eval.n;
  std::cout << row.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Text generation by discrete local search over a scored edit space"};
  app.require_subcommand(1);

  std::string corpus_path;
  std::string lm_out_path;
  int order = 3;
  int min_count = 1;
  CLI::App* train = app.add_subcommand("train-lm", "Train and save an n-gram language model");
  train->add_option("--corpus", corpus_path, "training corpus, one sentence per line")
      ->required();
  train->add_option("--order", order, "n-gram order, 1 to 5");
  train->add_option("--min-count", min_count, "fold rarer tokens into <unk>");
  train->add_option("--out", lm_out_path, "where to write the model")->required();

  std::string task_name;
  std::string config_path;
  std::string input_path;
  std::string out_path;
  std::string trace_path;
  std::uint64_t seed = 0;
  bool parallel = false;
  CLI::App* generate = app.add_subcommand("generate", "Run a generation task over input lines");
  generate->add_option("--task", task_name, "paraphrase|summarize|keywords|correct|style")
      ->required();
  generate->add_option("--config", config_path, "JSON config path")->required();
  generate->add_option("--input", input_path, "inputs, one per line")->required();
  generate->add_option("--out", out_path, "output JSONL path")->required();
  generate->add_option("--trace", trace_path, "optional per-step trace JSONL path");
  generate->add_option("--seed", seed, "base seed; input i uses seed + i");
  generate->add_flag("--parallel", parallel, "run inputs on OpenMP threads");

  std::string eval_inputs;
  std::string eval_outputs;
  std::string eval_references;
  double alpha = 0.9;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Report BLEU and iBLEU");
  evaluate->add_option("--outputs", eval_outputs, "generated sentences")->required();
  evaluate->add_option("--references", eval_references, "reference sentences")->required();
  evaluate->add_option("--inputs", eval_inputs, "original inputs")->required();
  evaluate->add_option("--alpha", alpha, "iBLEU mixing weight");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (train->parsed()) return cmd_train_lm(corpus_path, order, min_count, lm_out_path);
    if (generate->parsed()) {
      return cmd_generate(task_name, config_path, input_path, out_path, trace_path, seed,
                          parallel);
    }
    return cmd_evaluate(eval_inputs, eval_outputs, eval_references, alpha);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
