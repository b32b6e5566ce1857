#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "evonet/experiment.hpp"

using namespace evonet;
namespace fs = std::filesystem;

namespace {

const std::string kRoot = EVONET_SOURCE_DIR;

KeyValues kv_of(const std::string& text) {
  std::istringstream in(text);
  return KeyValues::parse(in, "test.cfg");
}

ExperimentConfig config_for(Algorithm algo, const std::string& text) {
  ExperimentConfig cfg;
  cfg.algorithm = algo;
  apply_config(cfg, kv_of(text));
  return cfg;
}

ExperimentConfig diabetes_nes(const fs::path& out) {
  ExperimentConfig cfg =
      config_for(Algorithm::nes, "population_size = 8\nsubpopulations = 2\nhidden_nodes = 2\nmax_generations = 5\n");
  cfg.data_path = kRoot + "/data/pima-indians-diabetes.data";
  cfg.schema_path = kRoot + "/data/diabetes.schema";
  cfg.runs = 2;
  cfg.seed = 5;
  cfg.out_dir = out.string();
  return cfg;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("evonet-test-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(KeyValues, ParsesCommentsAndWhitespace) {
  const auto kvs = kv_of("# comment\n  a = 1 \n\nb=two words\n");
  ASSERT_EQ(kvs.entries().size(), 2u);
  EXPECT_EQ(*kvs.find("a"), "1");
  EXPECT_EQ(*kvs.find("b"), "two words");
  EXPECT_EQ(kvs.find("c"), nullptr);
}

TEST(KeyValues, MalformedLineAndDuplicateRejected) {
  EXPECT_THROW(kv_of("no equals sign\n"), std::runtime_error);
  EXPECT_THROW(kv_of("a = 1\na = 2\n"), std::runtime_error);
}

TEST(Config, EpnetKeys) {
  const auto cfg = config_for(Algorithm::epnet,
                              "population_size = 12\nhidden_range = 2,4\nlearning_rate = 0.3\n"
                              "weight_init_range = -1,1\nshuffle = false\n");
  const auto& p = cfg.epnet();
  EXPECT_EQ(p.population_size, 12u);
  EXPECT_EQ(p.hidden_range, (std::pair<std::size_t, std::size_t>{2, 4}));
  EXPECT_EQ(p.trainer.learning_rate, 0.3);
  EXPECT_EQ(p.weight_init_range.lo, -1.0);
  EXPECT_FALSE(p.trainer.shuffle);
}

TEST(Config, BiasInitForms) {
  const auto constant = config_for(Algorithm::epnet, "bias_init = -1.5\n").epnet().bias_init;
  const auto uniform = config_for(Algorithm::epnet, "bias_init = -0.5,0.5\n").epnet().bias_init;
  Rng rng(1);
  EXPECT_EQ(constant.draw(rng), -1.5);
  for (int k = 0; k < 100; ++k) {
    const double b = uniform.draw(rng);
    EXPECT_GE(b, -0.5);
    EXPECT_LE(b, 0.5);
  }
}

TEST(Config, NesKeys) {
  const auto cfg = config_for(Algorithm::nes, "gamma = 4\nsigma_form = printed\ngenome_domain = -5,5\n");
  EXPECT_EQ(cfg.nes().gamma, 4.0);
  EXPECT_EQ(cfg.nes().sigma_form, SigmaForm::printed);
  EXPECT_EQ(cfg.nes().genome_domain.hi, 5.0);
  EXPECT_THROW(config_for(Algorithm::nes, "sigma_form = cubic\n"), std::runtime_error);
}

TEST(Config, UnknownKeyIsError) {
  EXPECT_THROW(config_for(Algorithm::epnet, "mutation_rate = 0.1\n"), std::runtime_error);
  // Keys belong to one algorithm only.
  EXPECT_THROW(config_for(Algorithm::nes, "learning_rate = 0.1\n"), std::runtime_error);
  EXPECT_THROW(config_for(Algorithm::epnet, "gamma = 8\n"), std::runtime_error);
}

TEST(Config, BadValueIsError) {
  EXPECT_THROW(config_for(Algorithm::epnet, "population_size = many\n"), std::runtime_error);
  EXPECT_THROW(config_for(Algorithm::epnet, "hidden_range = 3\n"), std::runtime_error);
}

TEST(Config, SplitKeys) {
  const auto cfg = config_for(Algorithm::nes, "train_count = 10\nvalidation_count = 5\ntest_count = 4\n");
  ASSERT_TRUE(cfg.split.has_value());
  EXPECT_EQ(*cfg.split, (SplitSpec{10, 5, 4}));
  EXPECT_FALSE(config_for(Algorithm::nes, "gamma = 2\n").split.has_value());
}

TEST(Config, BundledFilesParseAndValidate) {
  for (const char* algo : {"epnet", "nes"})
    for (const char* data : {"breast-cancer", "diabetes", "heart"}) {
      ExperimentConfig cfg;
      cfg.algorithm = parse_algorithm(algo);
      apply_config(cfg, KeyValues::load(kRoot + "/configs/" + algo + "-" + data + ".cfg"));
      EXPECT_NO_THROW(std::visit([](const auto& p) { p.validate(); }, cfg.params)) << algo << " " << data;
    }
  EXPECT_THROW(parse_algorithm("ga"), std::invalid_argument);
}

TEST(Experiment, ZeroGenerationsWritesHeaderOnlyHistory) {
  const auto out = scratch("zero");
  auto cfg = diabetes_nes(out);
  std::get<NesConfig>(cfg.params).max_generations = 0;
  cfg.runs = 1;
  run_experiment(cfg);
  EXPECT_EQ(slurp(out / "history_run0.csv"), std::string(kHistoryHeader) + "\n");
  EXPECT_TRUE(fs::exists(out / "runs.csv"));
  fs::remove_all(out);
}

TEST(Experiment, WritesAllOutputs) {
  const auto out = scratch("outputs");
  auto cfg = diabetes_nes(out);
  cfg.dump_best = true;
  const auto result = run_experiment(cfg);
  for (const char* f : {"history_run0.csv", "history_run1.csv", "runs.csv", "aggregate.csv", "report.txt",
                        "best_net_run0.txt", "best_net_run1.txt"})
    EXPECT_TRUE(fs::exists(out / f)) << f;
  std::ifstream runs(out / "runs.csv");
  const auto rows = read_runs_csv(runs);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].seed, 6u);
  std::ifstream dump(out / "best_net_run1.txt");
  const Network net = read_network(dump);
  EXPECT_EQ(net, compacted(result.runs[1].best));
  fs::remove_all(out);
}

TEST(Experiment, ThreadCountDoesNotChangeOutputs) {
  const auto a = scratch("serial"), b = scratch("parallel");
  auto cfg = diabetes_nes(a);
  cfg.runs = 3;
  run_experiment(cfg);
  cfg.out_dir = b.string();
  cfg.jobs = 3;
  run_experiment(cfg);
  for (const char* f : {"history_run0.csv", "history_run2.csv", "runs.csv", "report.txt"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Experiment, MissingFilesAndBadRuns) {
  auto cfg = diabetes_nes("");
  cfg.data_path = "/nonexistent.data";
  EXPECT_THROW(run_experiment(cfg), std::runtime_error);
  cfg = diabetes_nes("");
  cfg.runs = 0;
  EXPECT_THROW(run_experiment(cfg), std::invalid_argument);
  cfg = diabetes_nes("");
  cfg.algorithm = Algorithm::epnet;
  EXPECT_THROW(run_experiment(cfg), std::invalid_argument);
}
