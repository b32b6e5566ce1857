// EPNet: evolutionary programming over network architectures and weights.
//
// A steady-state loop picks one parent per generation by linear ranking.
// Parents whose last training succeeded get further training; failed parents
// go through the mutations in fixed order (hidden node deletion, connection
// deletion, then connection addition competing with node splitting), each
// offspring partially trained before it may replace the population's worst.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "evonet/history.hpp"
#include "evonet/mbp.hpp"
#include "evonet/network.hpp"
#include "evonet/patterns.hpp"

namespace evonet {

struct EpnetConfig {
  std::size_t population_size = 20;
  std::size_t initial_epochs = 50;
  std::size_t partial_epochs = 20;
  std::size_t max_deleted_nodes = 1;
  std::size_t max_mutated_connections = 3;
  std::size_t max_hidden = 10;
  std::pair<std::size_t, std::size_t> hidden_range{1, 3};
  double density = 1.0;
  Range weight_init_range{-0.5, 0.5};
  BiasInit bias_init = BiasInit::constant(-1.5);
  double stop_epsilon = 0.01;
  std::size_t stop_window = 10;
  std::size_t max_generations = 500;
  std::size_t final_training_epochs = 70;
  double target_error = 0.0;
  Range beta_range{-0.5, 0.5};
  TrainerConfig trainer;
  std::uint64_t seed = 1;

  void validate() const {
    if (population_size < 2) throw std::invalid_argument("population_size must be >= 2");
    if (initial_epochs < 1 || partial_epochs < 1) throw std::invalid_argument("epoch counts must be >= 1");
    if (max_deleted_nodes < 1) throw std::invalid_argument("max_deleted_nodes must be >= 1");
    if (max_mutated_connections < 1) throw std::invalid_argument("max_mutated_connections must be >= 1");
    if (hidden_range.first < 1 || hidden_range.first > hidden_range.second || hidden_range.second > max_hidden)
      throw std::invalid_argument("hidden_range must satisfy 1 <= lo <= hi <= max_hidden");
    if (density < 0.0 || density > 1.0) throw std::invalid_argument("density outside [0,1]");
    if (weight_init_range.lo > weight_init_range.hi) throw std::invalid_argument("empty weight_init_range");
    if (beta_range.lo > beta_range.hi) throw std::invalid_argument("empty beta_range");
    if (!(stop_epsilon > 0.0)) throw std::invalid_argument("stop_epsilon must be > 0");
    if (stop_window < 1) throw std::invalid_argument("stop_window must be >= 1");
    trainer.validate();
  }
};

struct EpnetIndividual {
  Network network;
  TrainerState trainer;
  double validation_error = 0.0;
  Mark mark = Mark::failure;
  double train_error = 0.0;
};

inline EpnetIndividual make_individual(TrainOutcome&& out, const PatternSet& train) {
  const double train_error = error_percentage(out.network, train);
  return {std::move(out.network), std::move(out.state), out.error_after, out.mark, train_error};
}

/// Ranking order: lower validation error, then fewer connections.
inline bool ranks_before(const EpnetIndividual& a, const EpnetIndividual& b) {
  if (a.validation_error != b.validation_error) return a.validation_error < b.validation_error;
  return a.network.connection_count() < b.network.connection_count();
}

/// Stable, so equal individuals keep their previous relative order.
inline void rank_population(std::vector<EpnetIndividual>& pop) {
  std::stable_sort(pop.begin(), pop.end(), ranks_before);
}

inline void check_split(const DataSplit& data) {
  data.train.validate();
  data.validation.validate();
  data.test.validate();
  const auto m = data.train.input_width();
  const auto n = data.train.output_width();
  for (const PatternSet* p : {&data.validation, &data.test})
    if (p->input_width() != m || p->output_width() != n)
      throw std::invalid_argument("partitions disagree on dimensions");
}

inline std::vector<EpnetIndividual> init_population(const EpnetConfig& cfg, const DataSplit& data, Rng& rng) {
  cfg.validate();
  check_split(data);
  std::vector<EpnetIndividual> pop;
  pop.reserve(cfg.population_size);
  for (std::size_t k = 0; k < cfg.population_size; ++k) {
    Network net = random_network(data.train.input_width(), data.train.output_width(), cfg.max_hidden,
                                 cfg.hidden_range, cfg.density, cfg.weight_init_range, cfg.bias_init, rng);
    pop.push_back(make_individual(partial_train(net, data.train, data.validation, cfg.initial_epochs,
                                                TrainerState::from(cfg.trainer), cfg.trainer, &rng),
                                  data.train));
  }
  return pop;
}

/// Linear ranking: rank k (1 = best) of M is chosen with probability
/// 2 (M + 1 - k) / (M (M + 1)).
inline std::vector<double> rank_probabilities(std::size_t population_size) {
  if (population_size == 0) throw std::invalid_argument("empty population");
  const double M = static_cast<double>(population_size);
  std::vector<double> p(population_size);
  for (std::size_t k = 1; k <= population_size; ++k)
    p[k - 1] = 2.0 * (M + 1.0 - static_cast<double>(k)) / (M * (M + 1.0));
  return p;
}

/// Returns a 0-based index into a best-first population.
inline std::size_t rank_select(std::size_t population_size, Rng& rng) {
  const auto p = rank_probabilities(population_size);
  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    if (u < p[k]) return k;
    u -= p[k];
  }
  return p.size() - 1;
}

/// Removes `count` distinct active hidden nodes chosen uniformly. Refused
/// (nullopt) when that would leave no hidden node.
inline std::optional<Network> delete_nodes(const Network& net, std::size_t count, Rng& rng) {
  if (count == 0 || count >= net.hidden_count()) return std::nullopt;
  Network out = net;
  std::vector<std::size_t> victims;
  std::sample(net.hidden_nodes().begin(), net.hidden_nodes().end(), std::back_inserter(victims), count, rng);
  for (auto h : victims) out.deactivate_hidden(h);
  return out;
}

namespace detail {

/// Draws up to `count` distinct indices, each step proportional to the
/// remaining weights. Stops early once no positive mass is left.
inline std::vector<std::size_t> weighted_sample(std::vector<double> weights, std::size_t count, Rng& rng) {
  std::vector<std::size_t> picked;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (picked.size() < count) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0.0)) break;
    double u = unit(rng) * total;
    std::size_t k = 0;
    std::size_t last_positive = 0;
    for (; k < weights.size(); ++k) {
      if (weights[k] <= 0.0) continue;
      last_positive = k;
      if (u < weights[k]) break;
      u -= weights[k];
    }
    if (k == weights.size()) k = last_positive;
    picked.push_back(k);
    weights[k] = 0.0;
  }
  return picked;
}

}  // namespace detail

/// Deletes `count` present connections, each drawn with probability
/// proportional to 1 / (1 + importance). Connections with infinite
/// importance are never chosen. nullopt when nothing is deletable.
inline std::optional<Network> delete_connections(const Network& net, const TrainerState& state, std::size_t count,
                                                 Rng& rng) {
  const std::size_t present = net.connection_count();
  if (present < 2 || count == 0) return std::nullopt;
  if (count > present - 1) throw std::invalid_argument("cannot delete every connection");
  const auto importance = connection_significance(state, net);
  std::vector<double> weights;
  weights.reserve(importance.size());
  for (const auto& imp : importance) weights.push_back(std::isinf(imp.value) ? 0.0 : 1.0 / (1.0 + imp.value));
  const auto picked = detail::weighted_sample(std::move(weights), count, rng);
  if (picked.empty()) return std::nullopt;
  Network out = net;
  for (auto k : picked) out.disconnect(importance[k].connection.to, importance[k].connection.from);
  return out;
}

/// Adds up to `count` virtual connections drawn proportionally to their
/// importance (infinite importance takes precedence; all-zero importance
/// falls back to uniform). New weights are drawn from `init_range`; a
/// degenerate range {0, 0} adds zero-weight connections.
inline std::optional<Network> add_connections(const Network& net, const TrainerState& state, std::size_t count,
                                              Range init_range, Rng& rng) {
  if (count == 0) return std::nullopt;
  auto importance = connection_significance(state, net, true);
  std::erase_if(importance, [](const Importance& imp) { return imp.present; });
  if (importance.empty()) return std::nullopt;

  const bool any_inf = std::any_of(importance.begin(), importance.end(),
                                   [](const Importance& imp) { return std::isinf(imp.value); });
  std::vector<double> weights;
  for (const auto& imp : importance)
    weights.push_back(any_inf ? (std::isinf(imp.value) ? 1.0 : 0.0) : imp.value);
  if (std::all_of(weights.begin(), weights.end(), [](double w) { return w <= 0.0; }))
    std::fill(weights.begin(), weights.end(), 1.0);

  auto picked = detail::weighted_sample(weights, count, rng);
  if (picked.size() < count && any_inf) {
    // Infinite-importance candidates ran out; continue over the finite ones.
    for (std::size_t k = 0; k < importance.size(); ++k) weights[k] = importance[k].value;
    for (auto k : picked) weights[k] = 0.0;
    if (std::all_of(weights.begin(), weights.end(), [](double w) { return w <= 0.0 || std::isinf(w); })) {
      for (std::size_t k = 0; k < weights.size(); ++k) weights[k] = std::isinf(importance[k].value) ? 0.0 : 1.0;
      for (auto k : picked) weights[k] = 0.0;
    }
    auto more = detail::weighted_sample(weights, count - picked.size(), rng);
    picked.insert(picked.end(), more.begin(), more.end());
  }

  Network out = net;
  for (auto k : picked) {
    const auto& c = importance[k].connection;
    out.connect(c.to, c.from, draw_uniform(init_range, rng));
  }
  return out;
}

/// Splits active hidden node `node` into two nodes with identical incoming
/// weights and bias. Each outgoing weight w becomes (1 + beta) w on the
/// original and -beta w on the copy, so the network function is unchanged.
/// The copy sits directly after the original; hidden nodes are compacted.
inline std::optional<Network> split_node_at(const Network& net, std::size_t node, double beta) {
  if (net.hidden_count() >= net.max_hidden()) return std::nullopt;
  const auto& hidden = net.hidden_nodes();
  const auto it = std::find(hidden.begin(), hidden.end(), node);
  if (it == hidden.end()) throw std::invalid_argument("split target is not an active hidden node");
  const auto rank = static_cast<std::size_t>(it - hidden.begin());

  std::vector<std::size_t> slots(hidden.size());
  for (std::size_t k = 0; k < hidden.size(); ++k) slots[k] = net.first_hidden() + k + (k > rank ? 1 : 0);
  Network out = relocate_hidden(net, slots);

  const std::size_t original = net.first_hidden() + rank;
  const std::size_t copy = original + 1;
  out.activate_hidden(copy);
  for (std::size_t j = 0; j < original; ++j)
    if (out.connected(original, j)) out.connect(copy, j, out.weight(original, j));
  out.set_bias(copy, out.bias(original));
  for (std::size_t i = copy + 1; i < out.node_count(); ++i) {
    if (!out.connected(i, original)) continue;
    const double w = out.weight(i, original);
    out.set_weight(i, original, (1.0 + beta) * w);
    out.connect(i, copy, -beta * w);
  }
  return out;
}

/// Splits a uniformly chosen hidden node with beta drawn from beta_range.
inline std::optional<Network> split_node(const Network& net, Rng& rng, Range beta_range) {
  if (net.hidden_count() == 0 || net.hidden_count() >= net.max_hidden()) return std::nullopt;
  const auto& hidden = net.hidden_nodes();
  const std::size_t node = hidden[draw_index(0, hidden.size() - 1, rng)];
  const double beta = draw_uniform(beta_range, rng);
  return split_node_at(net, node, beta);
}

struct EpnetResult {
  Network best;
  EvolutionHistory history;
  RunSummary summary;
};

class EpnetEvolver {
 public:
  EpnetEvolver(EpnetConfig cfg, const DataSplit& data) : cfg_(std::move(cfg)), data_(data), rng_(cfg_.seed) {
    cfg_.validate();
    check_split(data_);
  }

  const std::vector<EpnetIndividual>& population() const { return pop_; }
  const EvolutionHistory& history() const { return history_; }

  void initialize() {
    pop_ = init_population(cfg_, data_, rng_);
    rank_population(pop_);
    mean_train_errors_.assign(1, mean_train_error());
    history_.clear();
  }

  /// Runs one generation (steps 5-9). Returns false once a stop rule fires.
  bool step() {
    if (stopped()) return false;
    const std::size_t parent = rank_select(pop_.size(), rng_);
    std::string mutation = pop_[parent].mark == Mark::success ? further_training(parent) : mutate(parent);
    rank_population(pop_);
    mean_train_errors_.push_back(mean_train_error());
    record(std::move(mutation));
    return !stopped();
  }

  EpnetResult run() {
    initialize();
    while (step()) {
    }
    return finish();
  }

  /// Final stage: trains the best individual on training plus validation data.
  EpnetResult finish() {
    EpnetIndividual best = pop_.front();
    const PatternSet combined = concatenate(data_.train, data_.validation);
    for (std::size_t e = 0; e < cfg_.final_training_epochs; ++e)
      train_epoch(best.network, combined, best.trainer, cfg_.trainer, &rng_);
    return {best.network, history_, summarize(best.network, data_, history_.size())};
  }

 private:
  bool stopped() const {
    const std::size_t g = history_.size();
    if (g >= cfg_.max_generations) return true;
    if (!pop_.empty() && pop_.front().validation_error <= cfg_.target_error) return true;
    // Average training error of the population failed to drop by more than
    // epsilon over the last stop_window generations.
    if (g >= cfg_.stop_window &&
        mean_train_errors_[g - cfg_.stop_window] - mean_train_errors_[g] <= cfg_.stop_epsilon)
      return true;
    return false;
  }

  double mean_error() const {
    double s = 0.0;
    for (const auto& ind : pop_) s += ind.validation_error;
    return s / static_cast<double>(pop_.size());
  }

  double mean_train_error() const {
    double s = 0.0;
    for (const auto& ind : pop_) s += ind.train_error;
    return s / static_cast<double>(pop_.size());
  }

  EpnetIndividual train_offspring(const Network& net, const TrainerState& parent_state) {
    return make_individual(partial_train(net, data_.train, data_.validation, cfg_.partial_epochs, parent_state,
                                         cfg_.trainer, &rng_),
                           data_.train);
  }

  bool beats_worst(const EpnetIndividual& child) const { return ranks_before(child, pop_.back()); }

  std::string further_training(std::size_t parent) {
    EpnetIndividual child = train_offspring(pop_[parent].network, pop_[parent].trainer);
    if (parent == 0 && child.validation_error > pop_[parent].validation_error) {
      // Replacing the current best with a worse network would lose it; keep
      // the parent and route it to architectural mutation next time.
      pop_[parent].mark = Mark::failure;
      return "train:kept";
    }
    pop_[parent] = std::move(child);
    return "train";
  }

  std::string mutate(std::size_t parent_index) {
    const EpnetIndividual parent = pop_[parent_index];
    std::string attempts;

    const std::size_t hidden = parent.network.hidden_count();
    if (hidden > 1) {
      const std::size_t count = draw_index(1, std::min(cfg_.max_deleted_nodes, hidden - 1), rng_);
      if (auto net = delete_nodes(parent.network, count, rng_)) {
        attempts += "node_delete";
        EpnetIndividual child = train_offspring(*net, parent.trainer);
        if (beats_worst(child)) {
          pop_.back() = std::move(child);
          return attempts;
        }
      }
    }

    const std::size_t present = parent.network.connection_count();
    if (present > 1) {
      const std::size_t count = draw_index(1, std::min(cfg_.max_mutated_connections, present - 1), rng_);
      if (auto net = delete_connections(parent.network, parent.trainer, count, rng_)) {
        attempts += attempts.empty() ? "conn_delete" : ">conn_delete";
        EpnetIndividual child = train_offspring(*net, parent.trainer);
        if (beats_worst(child)) {
          pop_.back() = std::move(child);
          return attempts;
        }
      }
    }

    std::optional<EpnetIndividual> with_connections;
    const std::size_t absent = parent.network.virtual_connections().size();
    if (absent > 0) {
      const std::size_t count = draw_index(1, std::min(cfg_.max_mutated_connections, absent), rng_);
      if (auto net = add_connections(parent.network, parent.trainer, count, cfg_.weight_init_range, rng_))
        with_connections = train_offspring(*net, parent.trainer);
    }

    std::optional<EpnetIndividual> with_nodes;
    const std::size_t room = parent.network.max_hidden() - hidden;
    if (room > 0 && hidden > 0) {
      const std::size_t count = draw_index(1, std::min(cfg_.max_deleted_nodes, room), rng_);
      std::optional<Network> grown = parent.network;
      for (std::size_t k = 0; k < count && grown; ++k) grown = split_node(*grown, rng_, cfg_.beta_range);
      if (grown) with_nodes = train_offspring(*grown, parent.trainer);
    }

    const std::string prefix = attempts.empty() ? "" : attempts + ">";
    if (with_connections && with_nodes) {
      if (ranks_before(*with_nodes, *with_connections)) {
        pop_.back() = std::move(*with_nodes);
        return prefix + "add:node";
      }
      pop_.back() = std::move(*with_connections);
      return prefix + "add:conn";
    }
    if (with_connections) {
      pop_.back() = std::move(*with_connections);
      return prefix + "add:conn";
    }
    if (with_nodes) {
      pop_.back() = std::move(*with_nodes);
      return prefix + "add:node";
    }
    return prefix + "none";
  }

  void record(std::string mutation) {
    const auto& best = pop_.front();
    GenerationRecord r;
    r.generation = history_.size() + 1;
    r.best_error = best.validation_error;
    r.mean_error = mean_error();
    r.best_connections = best.network.connection_count();
    r.best_hidden = best.network.hidden_count();
    r.best_train_error = best.train_error;
    r.best_validation_error = best.validation_error;
    r.mutation = std::move(mutation);
    history_.push_back(std::move(r));
  }

  EpnetConfig cfg_;
  const DataSplit& data_;
  Rng rng_;
  std::vector<EpnetIndividual> pop_;
  std::vector<double> mean_train_errors_;
  EvolutionHistory history_;
};

inline EpnetResult evolve_epnet(const EpnetConfig& cfg, const DataSplit& data) {
  return EpnetEvolver(cfg, data).run();
}

}  // namespace evonet
