// Flat `key = value` experiment configuration. Keys are the field names of
// EpnetConfig / NesConfig (trainer fields are flattened into the EPNet set)
// plus train_count, validation_count and test_count for the data split.
// Unknown keys are errors.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "evonet/dataset.hpp"
#include "evonet/epnet.hpp"
#include "evonet/keyvalue.hpp"
#include "evonet/nes.hpp"

namespace evonet {

enum class Algorithm { epnet, nes };

inline Algorithm parse_algorithm(const std::string& s) {
  if (s == "epnet") return Algorithm::epnet;
  if (s == "nes") return Algorithm::nes;
  throw std::invalid_argument("unknown algorithm '" + s + "' (expected epnet or nes)");
}

inline const char* to_string(Algorithm a) { return a == Algorithm::epnet ? "epnet" : "nes"; }

namespace detail {

inline std::pair<std::size_t, std::size_t> to_size_range(const std::string& key, const std::string& value) {
  const auto parts = split(value, ',');
  if (parts.size() != 2) throw kv::bad_value(key, value, "expected lo,hi");
  return {kv::to_uint(key, parts[0]), kv::to_uint(key, parts[1])};
}

/// A single number is a constant bias; `lo,hi` draws uniformly.
inline BiasInit to_bias_init(const std::string& key, const std::string& value) {
  if (value.find(',') == std::string::npos) return BiasInit::constant(kv::to_double(key, value));
  const Range r = kv::to_range(key, value);
  return BiasInit::uniform(r.lo, r.hi);
}

inline bool apply_trainer_key(TrainerConfig& t, const std::string& key, const std::string& value) {
  if (key == "learning_rate") t.learning_rate = kv::to_double(key, value);
  else if (key == "lr_up") t.lr_up = kv::to_double(key, value);
  else if (key == "lr_down") t.lr_down = kv::to_double(key, value);
  else if (key == "lr_min") t.lr_min = kv::to_double(key, value);
  else if (key == "lr_max") t.lr_max = kv::to_double(key, value);
  else if (key == "train_bias") t.train_bias = kv::to_bool(key, value);
  else if (key == "shuffle") t.shuffle = kv::to_bool(key, value);
  else if (key == "success_threshold") t.success_threshold = kv::to_double(key, value);
  else return false;
  return true;
}

}  // namespace detail

inline bool apply_key(EpnetConfig& c, const std::string& key, const std::string& value) {
  if (key == "population_size") c.population_size = kv::to_uint(key, value);
  else if (key == "initial_epochs") c.initial_epochs = kv::to_uint(key, value);
  else if (key == "partial_epochs") c.partial_epochs = kv::to_uint(key, value);
  else if (key == "max_deleted_nodes") c.max_deleted_nodes = kv::to_uint(key, value);
  else if (key == "max_mutated_connections") c.max_mutated_connections = kv::to_uint(key, value);
  else if (key == "max_hidden") c.max_hidden = kv::to_uint(key, value);
  else if (key == "hidden_range") c.hidden_range = detail::to_size_range(key, value);
  else if (key == "density") c.density = kv::to_double(key, value);
  else if (key == "weight_init_range") c.weight_init_range = kv::to_range(key, value);
  else if (key == "bias_init") c.bias_init = detail::to_bias_init(key, value);
  else if (key == "stop_epsilon") c.stop_epsilon = kv::to_double(key, value);
  else if (key == "stop_window") c.stop_window = kv::to_uint(key, value);
  else if (key == "max_generations") c.max_generations = kv::to_uint(key, value);
  else if (key == "final_training_epochs") c.final_training_epochs = kv::to_uint(key, value);
  else if (key == "target_error") c.target_error = kv::to_double(key, value);
  else if (key == "beta_range") c.beta_range = kv::to_range(key, value);
  else if (key == "seed") c.seed = kv::to_uint(key, value);
  else return detail::apply_trainer_key(c.trainer, key, value);
  return true;
}

inline bool apply_key(NesConfig& c, const std::string& key, const std::string& value) {
  if (key == "population_size") c.population_size = kv::to_uint(key, value);
  else if (key == "subpopulations") c.subpopulations = kv::to_uint(key, value);
  else if (key == "gamma") c.gamma = kv::to_double(key, value);
  else if (key == "max_generations") c.max_generations = kv::to_uint(key, value);
  else if (key == "genome_domain") c.genome_domain = kv::to_range(key, value);
  else if (key == "init_range") c.init_range = kv::to_range(key, value);
  else if (key == "hidden_nodes") c.hidden_nodes = kv::to_uint(key, value);
  else if (key == "target_error") c.target_error = kv::to_double(key, value);
  else if (key == "seed") c.seed = kv::to_uint(key, value);
  else if (key == "sigma_form") {
    if (value == "power") c.sigma_form = SigmaForm::power;
    else if (value == "printed") c.sigma_form = SigmaForm::printed;
    else throw kv::bad_value(key, value, "expected power or printed");
  } else return false;
  return true;
}

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::epnet;
  std::string data_path;
  std::string schema_path;
  std::optional<SplitSpec> split;  // defaults to default_split(rows)
  std::variant<EpnetConfig, NesConfig> params;
  std::size_t runs = 30;
  std::uint64_t seed = 1;
  std::string out_dir;
  bool dump_best = false;
  std::size_t jobs = 1;

  const EpnetConfig& epnet() const { return std::get<EpnetConfig>(params); }
  const NesConfig& nes() const { return std::get<NesConfig>(params); }
};

/// Applies config-file entries for `algorithm` on top of its defaults.
inline void apply_config(ExperimentConfig& cfg, const KeyValues& kvs) {
  if (cfg.algorithm == Algorithm::epnet) {
    if (!std::holds_alternative<EpnetConfig>(cfg.params)) cfg.params = EpnetConfig{};
  } else if (!std::holds_alternative<NesConfig>(cfg.params)) {
    cfg.params = NesConfig{};
  }
  SplitSpec split = cfg.split.value_or(SplitSpec{});
  bool split_given = cfg.split.has_value();
  for (const auto& [key, value] : kvs.entries()) {
    if (key == "train_count" || key == "validation_count" || key == "test_count") {
      const std::size_t n = kv::to_uint(key, value);
      (key == "train_count" ? split.train : key == "validation_count" ? split.validation : split.test) = n;
      split_given = true;
      continue;
    }
    const bool known = std::visit([&](auto& p) { return apply_key(p, key, value); }, cfg.params);
    if (!known)
      throw std::runtime_error(kvs.source() + ": unknown key '" + key + "' for " + to_string(cfg.algorithm));
  }
  if (split_given) cfg.split = split;
}

}  // namespace evonet
