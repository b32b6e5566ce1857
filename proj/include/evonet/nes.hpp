// Novel evolution strategy over the flat weight genome of a fixed network:
// subpopulation-based max-mean arithmetical crossover, time-variant Gaussian
// mutation and (mu + mu) survivor selection.
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
#include "evonet/network.hpp"
#include "evonet/patterns.hpp"

namespace evonet {

using Genome = std::vector<double>;

// Genome values are kept on a fixed-point grid (multiples of 2^-44) inside
// [-256, 256]. On that grid sums of two values are exact, so crossover
// conserves elite + virtual parent bit for bit.
inline constexpr double kGenomeQuantum = 0x1p-44;
inline constexpr double kGenomeBound = 256.0;

inline double quantize(double x) { return std::nearbyint(x / kGenomeQuantum) * kGenomeQuantum; }

inline bool on_grid(double x) { return std::abs(x) <= kGenomeBound && quantize(x) == x; }

/// Placement of the uniform draw r in the mutation step function.
///  power:   sigma(t) = 1 - r^((1 - t/T)^gamma)
///  printed: sigma(t) = 1 - r * ((1 - t) / T)^gamma
enum class SigmaForm { power, printed };

struct NesConfig {
  std::size_t population_size = 20;
  std::size_t subpopulations = 4;
  double gamma = 8.0;
  std::size_t max_generations = 500;
  Range genome_domain{-10.0, 10.0};
  Range init_range{-0.5, 0.5};
  std::size_t hidden_nodes = 8;
  SigmaForm sigma_form = SigmaForm::power;
  double target_error = 0.0;
  std::uint64_t seed = 1;

  std::size_t subpopulation_size() const { return population_size / subpopulations; }

  void validate() const {
    if (subpopulations == 0 || population_size % subpopulations != 0)
      throw std::invalid_argument("population_size must be a multiple of subpopulations");
    if (subpopulation_size() < 2) throw std::invalid_argument("subpopulations need at least two members");
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
    if (!(genome_domain.lo < genome_domain.hi)) throw std::invalid_argument("empty genome_domain");
    if (genome_domain.lo < -kGenomeBound || genome_domain.hi > kGenomeBound)
      throw std::invalid_argument("genome_domain must lie inside [-256, 256]");
    if (init_range.lo > init_range.hi || init_range.lo < genome_domain.lo || init_range.hi > genome_domain.hi)
      throw std::invalid_argument("init_range must lie inside genome_domain");
  }
};

struct NesIndividual {
  Genome genome;
  double cost = std::numeric_limits<double>::quiet_NaN();

  bool evaluated() const { return !std::isnan(cost); }
};

struct Subpopulation {
  std::vector<std::size_t> members;
  std::size_t elite = 0;
  Genome virtual_parent;
};

/// Crossover with explicit per-variable weights alpha_i in [0,1]:
///   child1 = alpha * elite + (1 - alpha) * virtual
///   child2 = (1 - alpha) * elite + alpha * virtual
/// child1 is rounded to the genome grid and child2 taken as the exact
/// remainder (elite + virtual) - child1.
inline std::pair<Genome, Genome> sbmac_pair(std::span<const double> elite, std::span<const double> virtual_parent,
                                            std::span<const double> alpha) {
  if (elite.size() != virtual_parent.size() || alpha.size() != elite.size())
    throw std::invalid_argument("sbmac: length mismatch");
  Genome c1(elite.size()), c2(elite.size());
  for (std::size_t i = 0; i < elite.size(); ++i) {
    const double a = alpha[i];
    const double e = elite[i], v = virtual_parent[i];
    c1[i] = std::clamp(quantize(a * e + (1.0 - a) * v), std::min(e, v), std::max(e, v));
    c2[i] = (e + v) - c1[i];
  }
  return {std::move(c1), std::move(c2)};
}

inline std::pair<Genome, Genome> sbmac_pair(std::span<const double> elite, std::span<const double> virtual_parent,
                                            Rng& rng) {
  if (elite.size() != virtual_parent.size()) throw std::invalid_argument("sbmac: length mismatch");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Genome alpha(elite.size());
  for (auto& a : alpha) a = unit(rng);
  return sbmac_pair(elite, virtual_parent, alpha);
}

/// Mutation step at generation t for a given uniform draw r.
inline double tvm_sigma(std::size_t t, const NesConfig& cfg, double r) {
  if (cfg.max_generations == 0 || t > cfg.max_generations)
    throw std::invalid_argument("tvm_sigma needs 0 <= t <= max_generations, max_generations >= 1");
  const double T = static_cast<double>(cfg.max_generations);
  const double td = static_cast<double>(t);
  if (cfg.sigma_form == SigmaForm::printed) return 1.0 - r * std::pow((1.0 - td) / T, cfg.gamma);
  return 1.0 - std::pow(r, std::pow(1.0 - td / T, cfg.gamma));
}

inline double tvm_sigma(std::size_t t, const NesConfig& cfg, Rng& rng) {
  return tvm_sigma(t, cfg, std::uniform_real_distribution<double>(0.0, 1.0)(rng));
}

/// genome + sigma * gaussians, or the genome untouched if any mutated
/// variable leaves the domain.
inline Genome tvm_apply(std::span<const double> genome, double sigma, std::span<const double> gaussians,
                        Range domain) {
  if (gaussians.size() != genome.size()) throw std::invalid_argument("tvm: length mismatch");
  Genome out(genome.begin(), genome.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = quantize(out[i] + sigma * gaussians[i]);
    if (!domain.contains(out[i])) return Genome(genome.begin(), genome.end());
  }
  return out;
}

/// One sigma per offspring, fresh standard normal per variable.
inline NesIndividual tvm_mutate(const NesIndividual& child, std::size_t t, const NesConfig& cfg, Rng& rng) {
  const double sigma = tvm_sigma(t, cfg, rng);
  std::normal_distribution<double> normal(0.0, 1.0);
  Genome z(child.genome.size());
  for (auto& v : z) v = normal(rng);
  NesIndividual out;
  out.genome = tvm_apply(child.genome, sigma, z, cfg.genome_domain);
  if (out.genome == child.genome) out.cost = child.cost;
  return out;
}

/// Elite (lowest cost, first on ties) and the mean of the other members.
inline Subpopulation make_subpopulation(std::span<const NesIndividual> population, std::vector<std::size_t> members) {
  if (members.size() < 2) throw std::invalid_argument("subpopulation needs at least two members");
  Subpopulation sp;
  sp.members = std::move(members);
  sp.elite = sp.members.front();
  for (auto idx : sp.members) {
    if (!population[idx].evaluated()) throw std::invalid_argument("unevaluated individual");
    if (population[idx].cost < population[sp.elite].cost) sp.elite = idx;
  }
  const std::size_t len = population[sp.elite].genome.size();
  sp.virtual_parent.assign(len, 0.0);
  for (auto idx : sp.members) {
    if (idx == sp.elite) continue;
    for (std::size_t i = 0; i < len; ++i) sp.virtual_parent[i] += population[idx].genome[i];
  }
  const double others = static_cast<double>(sp.members.size() - 1);
  for (auto& v : sp.virtual_parent) v = quantize(v / others);
  return sp;
}

/// Random permutation of the population cut into `count` equal blocks.
inline std::vector<Subpopulation> partition_subpopulations(std::span<const NesIndividual> population, std::size_t count,
                                                           Rng& rng) {
  if (count == 0 || population.size() % count != 0)
    throw std::invalid_argument("population size must be a multiple of the subpopulation count");
  std::vector<std::size_t> order(population.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t block = population.size() / count;
  std::vector<Subpopulation> out;
  for (std::size_t b = 0; b < count; ++b)
    out.push_back(make_subpopulation(
        population, {order.begin() + static_cast<std::ptrdiff_t>(b * block),
                     order.begin() + static_cast<std::ptrdiff_t>((b + 1) * block)}));
  return out;
}

/// (mu + mu) selection: the mu lowest costs of parents followed by children.
/// Ties keep parents ahead of children, then lower index.
inline std::vector<NesIndividual> alternate_generation(std::vector<NesIndividual> parents,
                                                       std::vector<NesIndividual> children) {
  if (parents.size() != children.size()) throw std::invalid_argument("parent/child count mismatch");
  const std::size_t mu = parents.size();
  std::vector<NesIndividual> pool = std::move(parents);
  pool.insert(pool.end(), std::make_move_iterator(children.begin()), std::make_move_iterator(children.end()));
  for (const auto& ind : pool)
    if (!ind.evaluated()) throw std::invalid_argument("unevaluated individual");
  std::stable_sort(pool.begin(), pool.end(),
                   [](const NesIndividual& a, const NesIndividual& b) { return a.cost < b.cost; });
  pool.resize(mu);
  return pool;
}

/// Error percentage on `patterns` of the template carrying `genome`.
inline double genome_cost(const Network& tmpl, std::span<const double> genome, const PatternSet& patterns) {
  return error_percentage(unflatten(tmpl, genome), patterns);
}

struct NesResult {
  Network best;
  Genome genome;
  EvolutionHistory history;
  RunSummary summary;
};

class NesEvolver {
 public:
  NesEvolver(NesConfig cfg, const Network& tmpl, const DataSplit& data)
      : cfg_(std::move(cfg)), tmpl_(tmpl), data_(data), rng_(cfg_.seed) {
    cfg_.validate();
    data_.train.validate();
    check_dimensions(tmpl_, data_.train);
    if (tmpl_.hidden_count() != cfg_.hidden_nodes) throw std::invalid_argument("template hidden count mismatch");
  }

  const std::vector<NesIndividual>& population() const { return pop_; }
  const EvolutionHistory& history() const { return history_; }

  void initialize() {
    const std::size_t len = genome_length(tmpl_);
    pop_.assign(cfg_.population_size, {});
    for (auto& ind : pop_) {
      ind.genome.resize(len);
      for (auto& v : ind.genome) v = quantize(draw_uniform(cfg_.init_range, rng_));
      ind.cost = cost(ind.genome);
    }
    std::stable_sort(pop_.begin(), pop_.end(),
                     [](const NesIndividual& a, const NesIndividual& b) { return a.cost < b.cost; });
    history_.clear();
  }

  /// One generation: crossover, mutation, evaluation, (mu + mu) selection.
  bool step() {
    if (stopped()) return false;
    const std::size_t t = history_.size() + 1;
    std::vector<NesIndividual> children;
    children.reserve(pop_.size());
    for (const auto& sp : partition_subpopulations(pop_, cfg_.subpopulations, rng_)) {
      const auto& elite = pop_[sp.elite].genome;
      const std::size_t wanted = sp.members.size();
      for (std::size_t made = 0; made < wanted;) {
        auto [c1, c2] = sbmac_pair(elite, sp.virtual_parent, rng_);
        children.push_back({std::move(c1)});
        if (++made < wanted) {
          children.push_back({std::move(c2)});
          ++made;
        }
      }
    }
    for (auto& child : children) {
      child = tvm_mutate(child, t, cfg_, rng_);
      child.cost = cost(child.genome);
    }
    pop_ = alternate_generation(std::move(pop_), std::move(children));
    record(t);
    return !stopped();
  }

  NesResult run() {
    initialize();
    while (step()) {
    }
    return finish();
  }

  NesResult finish() const {
    const Genome& g = pop_.front().genome;
    Network best = unflatten(tmpl_, g);
    return {best, g, history_, summarize(best, data_, history_.size())};
  }

 private:
  bool stopped() const {
    return history_.size() >= cfg_.max_generations || pop_.front().cost <= cfg_.target_error;
  }

  double cost(const Genome& g) const { return genome_cost(tmpl_, g, data_.train); }

  void record(std::size_t t) {
    const auto& best = pop_.front();
    double mean = 0.0;
    for (const auto& ind : pop_) mean += ind.cost;
    GenerationRecord r;
    r.generation = t;
    r.best_error = best.cost;
    r.mean_error = mean / static_cast<double>(pop_.size());
    r.best_connections = tmpl_.connection_count();
    r.best_hidden = tmpl_.hidden_count();
    r.best_train_error = best.cost;
    r.best_validation_error = genome_cost(tmpl_, best.genome, data_.validation);
    r.mutation = "sbmac+tvm";
    history_.push_back(std::move(r));
  }

  NesConfig cfg_;
  Network tmpl_;
  const DataSplit& data_;
  Rng rng_;
  std::vector<NesIndividual> pop_;
  EvolutionHistory history_;
};

inline NesResult evolve_nes(const NesConfig& cfg, const DataSplit& data) {
  const Network tmpl = full_template(data.train.input_width(), data.train.output_width(), cfg.hidden_nodes);
  return NesEvolver(cfg, tmpl, data).run();
}

}  // namespace evonet
