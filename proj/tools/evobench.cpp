// evobench: run seeded EPNet / NES experiments and the built-in checks.
#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "evonet/evonet.hpp"

namespace {

struct RunArgs {
  std::string algo;
  std::string data;
  std::string schema;
  std::string config;
  std::size_t runs = 30;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::size_t jobs = 1;
  bool dump_best = false;
};

int do_run(const RunArgs& a) {
  evonet::ExperimentConfig cfg;
  cfg.algorithm = evonet::parse_algorithm(a.algo);
  cfg.data_path = a.data;
  cfg.schema_path = a.schema;
  evonet::apply_config(cfg, a.config.empty() ? evonet::KeyValues{} : evonet::KeyValues::load(a.config));
  // A seed in the config file is the base seed unless --seed overrides it.
  cfg.seed = a.seed.value_or(std::visit([](const auto& p) { return p.seed; }, cfg.params));
  cfg.runs = a.runs;
  cfg.out_dir = a.out;
  cfg.jobs = a.jobs;
  cfg.dump_best = a.dump_best;

  const auto result = evonet::run_experiment(cfg);
  evonet::write_report_text(std::cout, result.report.title, result.report.runs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evolve neural network classifiers with EPNet or NES"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run R seeded experiments and write history and report files");
  run_cmd->add_option("--algo", run.algo, "epnet or nes")->required()->check(CLI::IsMember({"epnet", "nes"}));
  run_cmd->add_option("--data", run.data, "Comma-separated data file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--schema", run.schema, "Data set schema (key=value)")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--config", run.config, "Algorithm config (key = value)")->check(CLI::ExistingFile);
  run_cmd->add_option("--runs", run.runs, "Number of runs")->check(CLI::PositiveNumber)->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Base seed; run k uses seed + k");
  run_cmd->add_option("--out", run.out, "Output directory")->required();
  run_cmd->add_option("--jobs", run.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  run_cmd->add_flag("--dump-best", run.dump_best, "Also write best_net_run<k>.txt");

  std::string suite;
  evonet::verify::Options vopts;
  std::string root;
  std::string work;
  auto* verify_cmd = app.add_subcommand("verify", "Run the built-in property and acceptance checks");
  verify_cmd->add_option("--suite", suite, "invariants or acceptance")
      ->required()
      ->check(CLI::IsMember({"invariants", "acceptance"}));
  verify_cmd->add_option("--root", root, "Directory holding data/ and configs/")->check(CLI::ExistingDirectory);
  verify_cmd->add_option("--work", work, "Scratch directory for experiment outputs");
  verify_cmd->add_option("--jobs", vopts.jobs, "Worker threads")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", vopts.seed, "Base seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return do_run(run);
    if (!root.empty()) vopts.root = root;
    if (!work.empty()) vopts.work_dir = work;
    const auto checks = evonet::verify::run_suite(evonet::verify::parse_suite(suite), vopts, std::cout);
    return evonet::verify::all_passed(checks) ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "evobench: " << e.what() << '\n';
    return 2;
  }
}
