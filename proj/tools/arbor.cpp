#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "arbor/cli.hpp"

namespace {

arbor::Json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw arbor::InputError("cannot open " + path);
  arbor::Json j;
  f >> j;
  return j;
}

void write_result(const std::string& path, const arbor::Json& j) {
  std::string text = arbor::dump_json(j);
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw arbor::InputError("cannot open " + path);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"arborescence completion, packing and decomposition with certificates"};
  app.require_subcommand(1);

  std::string in_path, out_path, condition, mode;
  arbor::CorpusOptions corpus;

  CLI::App* check = app.add_subcommand("check", "verify one feasibility condition");
  check->add_option("--in", in_path, "instance file")->required();
  check->add_option("--out", out_path, "result file (stdout when omitted)");
  check->add_option("--condition", condition,
                    "cond11|cond4|cond22|cond2|edmonds|spanning|cai_frank|cond54r|cond44|arboricity")
      ->required();

  CLI::App* solve = app.add_subcommand("solve", "run the instance's solve mode");
  solve->add_option("--in", in_path, "instance file")->required();
  solve->add_option("--out", out_path, "result file (stdout when omitted)");
  solve->add_option("--mode", mode, "override the instance's mode field");

  CLI::App* corpus_cmd = app.add_subcommand("corpus", "seeded solver/oracle agreement sweep");
  corpus_cmd->add_option("--seed", corpus.seed, "base seed");
  corpus_cmd->add_option("--count", corpus.count, "number of instances");
  corpus_cmd->add_option("--max-v", corpus.max_v, "vertex cap");
  corpus_cmd->add_option("--profile", corpus.profile, "sparse|tight|dense");
  corpus_cmd->add_option("--budget", corpus.budget, "brute-force node budget");
  corpus_cmd->add_flag("--selftest-corrupt", corpus.corrupt_first,
                       "flip one checker verdict to prove mismatches are caught");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) {
      arbor::Json out;
      int code = arbor::run_check(read_json(in_path), condition, out);
      write_result(out_path, out);
      return code;
    }
    if (solve->parsed()) {
      arbor::Json out;
      int code = arbor::run_solve(read_json(in_path), mode, out);
      write_result(out_path, out);
      return code;
    }
    return arbor::run_corpus(corpus, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
