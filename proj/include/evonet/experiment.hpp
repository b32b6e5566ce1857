#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "evonet/config.hpp"
#include "evonet/dataset.hpp"
#include "evonet/epnet.hpp"
#include "evonet/nes.hpp"
#include "evonet/report.hpp"

namespace evonet {

struct RunResult {
  Network best;
  EvolutionHistory history;
  RunSummary summary;
};

struct ExperimentResult {
  RunReport report;
  std::vector<RunResult> runs;
};

/// One seeded run of the configured algorithm.
inline RunResult run_once(const ExperimentConfig& cfg, const DataSplit& data, std::uint64_t seed) {
  if (cfg.algorithm == Algorithm::epnet) {
    EpnetConfig p = cfg.epnet();
    p.seed = seed;
    auto r = evolve_epnet(p, data);
    return {std::move(r.best), std::move(r.history), r.summary};
  }
  NesConfig p = cfg.nes();
  p.seed = seed;
  auto r = evolve_nes(p, data);
  return {std::move(r.best), std::move(r.history), r.summary};
}

struct SeedOutcome {
  std::vector<RunResult> results;
  std::vector<std::string> errors;  // empty string for a completed run

  bool ok() const {
    return std::all_of(errors.begin(), errors.end(), [](const std::string& e) { return e.empty(); });
  }
};

/// Runs `runs` independent seeds (base + 0 ... base + runs - 1) on up to
/// `jobs` worker threads. Results land in run order, so outputs do not depend
/// on scheduling. A failing run is recorded and the others still complete.
inline SeedOutcome run_seeds(const ExperimentConfig& cfg, const DataSplit& data) {
  const std::size_t runs = cfg.runs;
  SeedOutcome out{std::vector<RunResult>(runs), std::vector<std::string>(runs)};
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < runs;) {
      try {
        out.results[k] = run_once(cfg, data, cfg.seed + k);
      } catch (const std::exception& e) {
        out.errors[k] = e.what()[0] ? e.what() : "unknown error";
      } catch (...) {
        out.errors[k] = "unknown error";
      }
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(cfg.jobs, 1, std::max<std::size_t>(runs, 1));
  std::vector<std::jthread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  pool.clear();
  return out;
}

inline void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result) {
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  for (std::size_t k = 0; k < result.runs.size(); ++k) {
    emit_history_csv(result.runs[k].history, dir / ("history_run" + std::to_string(k) + ".csv"));
    if (cfg.dump_best) {
      const auto path = dir / ("best_net_run" + std::to_string(k) + ".txt");
      auto out = detail::open_for_write(path);
      write_network(out, result.runs[k].best);
      detail::finish_write(out, path);
    }
  }
  emit_report(result.report, dir);
}

/// Loads the data, executes every run and, when out_dir is set, writes
/// history_run<k>.csv, runs.csv, aggregate.csv, report.txt and optionally
/// best_net_run<k>.txt.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.runs < 1) throw std::invalid_argument("runs must be >= 1");
  for (const auto* p : {&cfg.data_path, &cfg.schema_path})
    if (!std::filesystem::exists(*p)) throw std::runtime_error("no such file: " + *p);
  const bool is_epnet = std::holds_alternative<EpnetConfig>(cfg.params);
  if (is_epnet != (cfg.algorithm == Algorithm::epnet))
    throw std::invalid_argument("algorithm and parameter set disagree");
  std::visit([](const auto& p) { p.validate(); }, cfg.params);

  const auto schema = DatasetSchema::load(cfg.schema_path);
  const PatternSet all = prepare(load_csv(cfg.data_path, schema), schema);
  const DataSplit data = partition(all, cfg.split.value_or(default_split(all.size())));

  ExperimentResult result;
  result.report.title = std::string(to_string(cfg.algorithm)) + " on " +
                        (schema.name.empty() ? std::filesystem::path(cfg.data_path).filename().string() : schema.name);
  auto outcome = run_seeds(cfg, data);
  if (!outcome.ok()) {
    std::string message;
    for (std::size_t k = 0; k < cfg.runs; ++k) {
      if (outcome.errors[k].empty()) {
        if (!cfg.out_dir.empty()) {
          std::filesystem::create_directories(cfg.out_dir);
          emit_history_csv(outcome.results[k].history,
                           std::filesystem::path(cfg.out_dir) / ("history_run" + std::to_string(k) + ".csv"));
        }
        continue;
      }
      message += "run " + std::to_string(k) + " (seed " + std::to_string(cfg.seed + k) +
                 ") failed: " + outcome.errors[k] + "\n";
    }
    throw std::runtime_error(message);
  }
  result.runs = std::move(outcome.results);
  for (std::size_t k = 0; k < result.runs.size(); ++k)
    result.report.runs.push_back({k, cfg.seed + k, result.runs[k].summary});
  if (!cfg.out_dir.empty()) write_outputs(cfg, result);
  return result;
}

}  // namespace evonet
