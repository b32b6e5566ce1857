// Modified backpropagation: per-pattern gradient descent on the half
// squared error with a bold-driver adaptive learning rate, plus the
// per-connection update statistics behind the connection significance test.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "evonet/network.hpp"
#include "evonet/patterns.hpp"

namespace evonet {

struct TrainerConfig {
  double learning_rate = 0.15;
  double lr_up = 1.05;
  double lr_down = 0.6;
  double lr_min = 1e-4;
  double lr_max = 1.0;
  bool train_bias = true;
  bool shuffle = false;
  double success_threshold = 0.01;

  void validate() const {
    if (!(lr_min >= 0.0 && lr_min <= lr_max)) throw std::invalid_argument("need 0 <= lr_min <= lr_max");
    if (learning_rate < lr_min || learning_rate > lr_max)
      throw std::invalid_argument("learning_rate outside [lr_min, lr_max]");
    if (lr_up < 1.0 || lr_down <= 0.0 || lr_down > 1.0)
      throw std::invalid_argument("need lr_up >= 1 and 0 < lr_down <= 1");
    if (success_threshold < 0.0 || success_threshold >= 1.0)
      throw std::invalid_argument("success_threshold outside [0, 1)");
  }
};

/// Welford accumulator; variance() is the population variance.
struct RunningStat {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }
  double variance() const { return count ? std::max(0.0, m2 / static_cast<double>(count)) : 0.0; }
  double stddev() const { return std::sqrt(variance()); }
};

/// Per (to, from) pair statistics of proposed per-pattern weight updates.
/// Covers every legal pair, present or virtual.
class UpdateStats {
 public:
  void reset(std::size_t dim) {
    dim_ = dim;
    cells_.assign(dim * dim, RunningStat{});
    samples_ = 0;
  }
  bool empty() const { return samples_ == 0; }
  std::size_t dim() const { return dim_; }
  const RunningStat& at(std::size_t to, std::size_t from) const { return cells_[to * dim_ + from]; }
  RunningStat& at(std::size_t to, std::size_t from) { return cells_[to * dim_ + from]; }
  void mark_sample() { ++samples_; }

 private:
  std::size_t dim_ = 0;
  std::size_t samples_ = 0;
  std::vector<RunningStat> cells_;
};

struct TrainerState {
  double learning_rate = 0.15;
  double last_epoch_error = std::numeric_limits<double>::infinity();
  UpdateStats update_stats;

  static TrainerState from(const TrainerConfig& cfg) { return {cfg.learning_rate, std::numeric_limits<double>::infinity(), {}}; }
};

enum class Mark { success, failure };

inline const char* to_string(Mark m) { return m == Mark::success ? "success" : "failure"; }

struct TrainOutcome {
  Network network;
  TrainerState state;
  std::size_t epochs_run = 0;
  double error_before = 0.0;
  double error_after = 0.0;
  Mark mark = Mark::failure;
};

/// Gradient of 0.5 * sum_i (d_i - y_i)^2 for one pattern. `weights` is a
/// node_count x node_count row-major matrix holding dLoss/dw_ij for every
/// legal pair (absent connections included, evaluated at w_ij = 0).
struct Gradient {
  std::vector<double> weights;
  std::vector<double> bias;
  double loss = 0.0;
};

namespace detail {

inline void backprop(const Network& net, const ActivationTrace& t, std::span<const double> target,
                     std::vector<double>& delta, Gradient& g) {
  const std::size_t dim = net.node_count();
  const std::size_t m = net.inputs();
  delta.assign(dim, 0.0);
  g.weights.assign(dim * dim, 0.0);
  g.bias.assign(dim, 0.0);
  g.loss = 0.0;
  for (std::size_t i = dim; i-- > m;) {
    if (!net.is_active(i)) continue;
    const double x = t.node_values[i];
    double err = 0.0;
    if (net.is_output(i)) {
      const double r = x - target[i - net.first_output()];
      err = r;
      g.loss += 0.5 * r * r;
    }
    for (std::size_t k = i + 1; k < dim; ++k)
      if (net.connected(k, i)) err += net.weight(k, i) * delta[k];
    delta[i] = err * x * (1.0 - x);
    g.bias[i] = delta[i] * kBiasSource;
    for (std::size_t j = 0; j < i; ++j)
      if (net.is_active(j)) g.weights[i * dim + j] = delta[i] * t.node_values[j];
  }
}

}  // namespace detail

inline Gradient gradient(const Network& net, std::span<const double> input, std::span<const double> target) {
  if (target.size() != net.outputs()) throw std::invalid_argument("target length mismatch");
  const auto t = trace(net, input);
  std::vector<double> delta;
  Gradient g;
  detail::backprop(net, t, target, delta, g);
  return g;
}

/// One pass of per-pattern updates in presentation order (shuffled when
/// configured, which requires `rng`). Only present connections and, when
/// enabled, bias weights move. Every legal pair's proposed update is
/// accumulated into state.update_stats. The learning rate then adapts on the
/// epoch's mean pattern loss.
inline void train_epoch(Network& net, const PatternSet& train, TrainerState& state, const TrainerConfig& cfg,
                        Rng* rng = nullptr) {
  check_dimensions(net, train);
  const std::size_t dim = net.node_count();
  if (state.update_stats.dim() != dim) state.update_stats.reset(dim);

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (cfg.shuffle) {
    if (!rng) throw std::invalid_argument("shuffled training needs an rng");
    std::shuffle(order.begin(), order.end(), *rng);
  }

  const double eta = state.learning_rate;
  std::vector<double> delta;
  Gradient g;
  double epoch_loss = 0.0;
  for (std::size_t t : order) {
    const auto tr = trace(net, train.inputs[t]);
    detail::backprop(net, tr, train.targets[t], delta, g);
    epoch_loss += g.loss;
    for (std::size_t i = net.inputs(); i < dim; ++i) {
      if (!net.is_active(i)) continue;
      for (std::size_t j = 0; j < i; ++j) {
        if (!net.is_active(j)) continue;
        const double proposal = -eta * g.weights[i * dim + j];
        state.update_stats.at(i, j).add(proposal);
        if (net.connected(i, j)) net.add_to_weight(i, j, proposal);
      }
      if (cfg.train_bias) net.add_to_bias(i, -eta * g.bias[i]);
    }
    state.update_stats.mark_sample();
  }

  epoch_loss /= static_cast<double>(train.size());
  if (epoch_loss < state.last_epoch_error) {
    state.learning_rate = std::min(state.learning_rate * cfg.lr_up, cfg.lr_max);
  } else {
    state.learning_rate = std::max(state.learning_rate * cfg.lr_down, cfg.lr_min);
  }
  state.last_epoch_error = epoch_loss;
}

/// Success iff the error fell below (1 - rho) times its starting value.
inline Mark success_mark(double error_before, double error_after, double rho) {
  return error_after < (1.0 - rho) * error_before ? Mark::success : Mark::failure;
}

/// Runs `epochs` training passes from fresh update statistics and marks the
/// result a success iff the validation error fell below
/// (1 - success_threshold) of its starting value.
inline TrainOutcome partial_train(const Network& net, const PatternSet& train, const PatternSet& validation,
                                  std::size_t epochs, TrainerState state, const TrainerConfig& cfg,
                                  Rng* rng = nullptr) {
  if (validation.empty()) throw std::invalid_argument("validation set is empty");
  if (epochs < 1) throw std::invalid_argument("partial training needs at least one epoch");
  TrainOutcome out{net, std::move(state), 0, 0.0, 0.0, Mark::failure};
  out.state.update_stats.reset(net.node_count());
  out.error_before = error_percentage(net, validation);
  for (; out.epochs_run < epochs; ++out.epochs_run) train_epoch(out.network, train, out.state, cfg, rng);
  out.error_after = error_percentage(out.network, validation);
  out.mark = success_mark(out.error_before, out.error_after, cfg.success_threshold);
  return out;
}

/// Significance of one pair: |w + mean(delta)| / stddev(delta). Zero spread
/// gives +infinity unless the numerator is also zero.
inline double significance(double w, const RunningStat& s) {
  const double num = std::abs(w + s.mean);
  const double sd = s.stddev();
  if (sd == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / sd;
}

struct Importance {
  Connection connection;
  double value = 0.0;
  bool present = true;
};

/// Importance of present connections, and of absent legal ("virtual")
/// connections evaluated at zero weight when include_virtual is set.
inline std::vector<Importance> connection_significance(const TrainerState& state, const Network& net,
                                                       bool include_virtual = false) {
  const auto& stats = state.update_stats;
  if (stats.empty() || stats.dim() != net.node_count())
    throw std::invalid_argument("connection significance needs update statistics for this network");
  std::vector<Importance> out;
  for (const auto& c : net.connections())
    out.push_back({c, significance(net.weight(c.to, c.from), stats.at(c.to, c.from)), true});
  if (include_virtual)
    for (const auto& c : net.virtual_connections())
      out.push_back({c, significance(0.0, stats.at(c.to, c.from)), false});
  return out;
}

}  // namespace evonet
