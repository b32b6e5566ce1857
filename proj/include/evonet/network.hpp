// Generalized feedforward multilayer perceptron under a direct
// (connectivity matrix + weight matrix + bias vector) encoding.
//
// Node ordering is fixed: inputs occupy [0, m), hidden slots
// [m, m + n_max), outputs [m + n_max, m + n_max + n). Node i may receive a
// connection from any active node j < i. Inactive hidden slots keep all-zero
// rows and columns, so hidden nodes can be removed or added without resizing.
#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace evonet {

using Rng = std::mt19937_64;

/// Value of the constant bias source feeding every non-input node.
inline constexpr double kBiasSource = 1.0;

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

/// Closed real interval [lo, hi].
struct Range {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return v >= lo && v <= hi; }
  bool operator==(const Range&) const = default;
};

inline double draw_uniform(Range r, Rng& rng) {
  if (r.lo == r.hi) return r.lo;
  return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
}

inline std::size_t draw_index(std::size_t lo, std::size_t hi, Rng& rng) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// How bias weights of freshly generated networks are initialized.
struct BiasInit {
  enum class Kind { constant, uniform };
  Kind kind = Kind::constant;
  Range range{-1.5, -1.5};

  static BiasInit constant(double v) { return {Kind::constant, {v, v}}; }
  static BiasInit uniform(double lo, double hi) { return {Kind::uniform, {lo, hi}}; }

  double draw(Rng& rng) const {
    return kind == Kind::constant ? range.lo : draw_uniform(range, rng);
  }
  bool operator==(const BiasInit&) const = default;
};

struct Connection {
  std::size_t to;
  std::size_t from;
  bool operator==(const Connection&) const = default;
};

class Network {
 public:
  Network() = default;
  Network(std::size_t inputs, std::size_t outputs, std::size_t max_hidden)
      : m_(inputs),
        n_(outputs),
        n_max_(max_hidden),
        active_(node_count(), 0),
        conn_(node_count() * node_count(), 0),
        w_(node_count() * node_count(), 0.0),
        bias_(max_hidden + outputs, 0.0) {
    if (inputs == 0 || outputs == 0)
      throw std::invalid_argument("network needs at least one input and one output");
    for (std::size_t i = 0; i < m_; ++i) active_[i] = 1;
    for (std::size_t i = first_output(); i < node_count(); ++i) active_[i] = 1;
  }

  std::size_t inputs() const { return m_; }
  std::size_t outputs() const { return n_; }
  std::size_t max_hidden() const { return n_max_; }
  std::size_t node_count() const { return m_ + n_max_ + n_; }
  std::size_t first_hidden() const { return m_; }
  std::size_t first_output() const { return m_ + n_max_; }

  bool is_input(std::size_t node) const { return node < m_; }
  bool is_hidden(std::size_t node) const { return node >= m_ && node < first_output(); }
  bool is_output(std::size_t node) const { return node >= first_output() && node < node_count(); }
  bool is_active(std::size_t node) const { return active_[node] != 0; }

  /// Active hidden node indices in ascending order.
  const std::vector<std::size_t>& hidden_nodes() const { return hidden_; }
  std::size_t hidden_count() const { return hidden_.size(); }

  /// A connection j -> i is feedforward-legal when both ends are active,
  /// i is not an input and j precedes i.
  bool legal(std::size_t to, std::size_t from) const {
    return to < node_count() && from < to && !is_input(to) && is_active(to) && is_active(from);
  }

  bool connected(std::size_t to, std::size_t from) const { return conn_[at(to, from)] != 0; }
  double weight(std::size_t to, std::size_t from) const { return w_[at(to, from)]; }

  /// Bias weight of a non-input node.
  double bias(std::size_t node) const { return bias_[node - m_]; }
  void set_bias(std::size_t node, double value) {
    if (is_input(node) || node >= node_count()) throw std::out_of_range("bias of input node");
    bias_[node - m_] = value;
  }

  void connect(std::size_t to, std::size_t from, double w) {
    if (!legal(to, from)) throw std::invalid_argument("connection is not feedforward-legal");
    conn_[at(to, from)] = 1;
    w_[at(to, from)] = w;
  }
  void disconnect(std::size_t to, std::size_t from) {
    conn_[at(to, from)] = 0;
    w_[at(to, from)] = 0.0;
  }
  void set_weight(std::size_t to, std::size_t from, double w) {
    if (!connected(to, from)) throw std::invalid_argument("weight on absent connection");
    w_[at(to, from)] = w;
  }
  /// Unchecked weight adjustment for the trainer's inner loop.
  void add_to_weight(std::size_t to, std::size_t from, double delta) { w_[at(to, from)] += delta; }
  void add_to_bias(std::size_t node, double delta) { bias_[node - m_] += delta; }

  void activate_hidden(std::size_t node) {
    if (!is_hidden(node)) throw std::out_of_range("not a hidden slot");
    if (active_[node]) return;
    active_[node] = 1;
    hidden_.insert(std::upper_bound(hidden_.begin(), hidden_.end(), node), node);
  }

  /// Removes a hidden node together with every connection touching it.
  void deactivate_hidden(std::size_t node) {
    if (!is_hidden(node)) throw std::out_of_range("not a hidden slot");
    for (std::size_t k = 0; k < node_count(); ++k) {
      disconnect(node, k);
      disconnect(k, node);
    }
    bias_[node - m_] = 0.0;
    active_[node] = 0;
    hidden_.erase(std::find(hidden_.begin(), hidden_.end(), node));
  }

  std::size_t connection_count() const {
    return static_cast<std::size_t>(std::count(conn_.begin(), conn_.end(), std::uint8_t{1}));
  }

  /// Present connections in row-major order.
  std::vector<Connection> connections() const {
    std::vector<Connection> out;
    for (std::size_t i = m_; i < node_count(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (connected(i, j)) out.push_back({i, j});
    return out;
  }

  /// Feedforward-legal connections that are currently absent.
  std::vector<Connection> virtual_connections() const {
    std::vector<Connection> out;
    for (std::size_t i = m_; i < node_count(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (legal(i, j) && !connected(i, j)) out.push_back({i, j});
    return out;
  }

  /// Throws std::logic_error describing the first violated structural invariant.
  void check_invariants() const {
    const std::size_t dim = node_count();
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        const bool c = connected(i, j);
        if (c && !legal(i, j))
          throw std::logic_error("illegal connection " + std::to_string(j) + "->" + std::to_string(i));
        if (!c && weight(i, j) != 0.0)
          throw std::logic_error("nonzero weight on absent connection");
      }
    }
    for (std::size_t h = m_; h < first_output(); ++h)
      if (!is_active(h) && bias(h) != 0.0) throw std::logic_error("inactive hidden node has a bias");
    if (!std::is_sorted(hidden_.begin(), hidden_.end())) throw std::logic_error("hidden list unsorted");
  }

  bool operator==(const Network&) const = default;

 private:
  std::size_t at(std::size_t to, std::size_t from) const { return to * node_count() + from; }

  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::size_t n_max_ = 0;
  std::vector<std::uint8_t> active_;
  std::vector<std::size_t> hidden_;
  std::vector<std::uint8_t> conn_;
  std::vector<double> w_;
  std::vector<double> bias_;
};

/// Per-node state of one forward pass. Both vectors span every node slot;
/// net_values is zero at input positions and inactive hidden slots.
struct ActivationTrace {
  std::vector<double> node_values;
  std::vector<double> net_values;
};

inline void check_input(const Network& net, std::span<const double> input) {
  if (input.size() != net.inputs())
    throw std::invalid_argument("input length " + std::to_string(input.size()) + " != " +
                                std::to_string(net.inputs()));
}

inline ActivationTrace trace(const Network& net, std::span<const double> input) {
  check_input(net, input);
  const std::size_t dim = net.node_count();
  ActivationTrace t{std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0)};
  std::copy(input.begin(), input.end(), t.node_values.begin());
  for (std::size_t i = net.inputs(); i < dim; ++i) {
    if (!net.is_active(i)) continue;
    double sum = net.bias(i) * kBiasSource;
    for (std::size_t j = 0; j < i; ++j)
      if (net.connected(i, j)) sum += net.weight(i, j) * t.node_values[j];
    t.net_values[i] = sum;
    t.node_values[i] = sigmoid(sum);
  }
  return t;
}

inline std::vector<double> forward(const Network& net, std::span<const double> input) {
  auto t = trace(net, input);
  return {t.node_values.begin() + static_cast<std::ptrdiff_t>(net.first_output()), t.node_values.end()};
}

/// Builds a random network: hidden count uniform in hidden_range, each legal
/// connection present with probability `density`, weights uniform in
/// weight_range. Active hidden nodes occupy the lowest hidden slots.
inline Network random_network(std::size_t inputs, std::size_t outputs, std::size_t max_hidden,
                              std::pair<std::size_t, std::size_t> hidden_range, double density,
                              Range weight_range, const BiasInit& bias_init, Rng& rng) {
  const auto [lo, hi] = hidden_range;
  if (lo < 1 || lo > hi || hi > max_hidden)
    throw std::invalid_argument("hidden range must satisfy 1 <= lo <= hi <= max_hidden");
  if (density < 0.0 || density > 1.0) throw std::invalid_argument("density outside [0,1]");
  if (weight_range.lo > weight_range.hi) throw std::invalid_argument("empty weight range");

  Network net(inputs, outputs, max_hidden);
  const std::size_t hidden = draw_index(lo, hi, rng);
  for (std::size_t k = 0; k < hidden; ++k) net.activate_hidden(net.first_hidden() + k);

  std::bernoulli_distribution present(density);
  for (std::size_t i = net.inputs(); i < net.node_count(); ++i) {
    if (!net.is_active(i)) continue;
    for (std::size_t j = 0; j < i; ++j) {
      if (!net.is_active(j)) continue;
      if (present(rng)) net.connect(i, j, draw_uniform(weight_range, rng));
    }
    net.set_bias(i, bias_init.draw(rng));
  }
  return net;
}

/// Fully connected network with `hidden` hidden nodes and zero weights.
inline Network full_template(std::size_t inputs, std::size_t outputs, std::size_t hidden) {
  Network net(inputs, outputs, hidden);
  for (std::size_t k = 0; k < hidden; ++k) net.activate_hidden(net.first_hidden() + k);
  for (std::size_t i = net.inputs(); i < net.node_count(); ++i)
    for (std::size_t j = 0; j < i; ++j) net.connect(i, j, 0.0);
  return net;
}

/// Non-input nodes that carry a bias weight (active hidden, then outputs).
inline std::vector<std::size_t> biased_nodes(const Network& net) {
  std::vector<std::size_t> out = net.hidden_nodes();
  for (std::size_t i = net.first_output(); i < net.node_count(); ++i) out.push_back(i);
  return out;
}

inline std::size_t genome_length(const Network& net) {
  return net.connection_count() + net.hidden_count() + net.outputs();
}

/// Genome layout: present connection weights in row-major (to, from) order,
/// followed by bias weights of active hidden nodes then outputs.
inline std::vector<double> flatten(const Network& net) {
  std::vector<double> genome;
  genome.reserve(genome_length(net));
  for (const auto& c : net.connections()) genome.push_back(net.weight(c.to, c.from));
  for (auto node : biased_nodes(net)) genome.push_back(net.bias(node));
  return genome;
}

inline Network unflatten(const Network& tmpl, std::span<const double> genome) {
  if (genome.size() != genome_length(tmpl))
    throw std::invalid_argument("genome length " + std::to_string(genome.size()) + " != " +
                                std::to_string(genome_length(tmpl)));
  Network net = tmpl;
  std::size_t k = 0;
  for (const auto& c : tmpl.connections()) net.set_weight(c.to, c.from, genome[k++]);
  for (auto node : biased_nodes(tmpl)) net.set_bias(node, genome[k++]);
  return net;
}

/// Moves the active hidden nodes to the given slots. `slots[k]` is the new
/// slot of the k-th active hidden node; slots must be strictly increasing so
/// the relative order, and therefore feedforward legality, is preserved.
inline Network relocate_hidden(const Network& net, std::span<const std::size_t> slots) {
  const auto& hidden = net.hidden_nodes();
  if (slots.size() != hidden.size()) throw std::invalid_argument("slot count mismatch");
  std::vector<std::size_t> map(net.node_count());
  for (std::size_t i = 0; i < net.node_count(); ++i) map[i] = i;
  for (std::size_t k = 0; k < hidden.size(); ++k) {
    if (!net.is_hidden(slots[k]) || (k > 0 && slots[k] <= slots[k - 1]))
      throw std::invalid_argument("hidden slots must be increasing hidden indices");
    map[hidden[k]] = slots[k];
  }
  Network out(net.inputs(), net.outputs(), net.max_hidden());
  for (std::size_t k = 0; k < hidden.size(); ++k) out.activate_hidden(slots[k]);
  for (const auto& c : net.connections()) out.connect(map[c.to], map[c.from], net.weight(c.to, c.from));
  for (auto node : biased_nodes(net)) out.set_bias(map[node], net.bias(node));
  return out;
}

/// Functionally identical copy with active hidden nodes in the lowest slots.
inline Network compacted(const Network& net) {
  std::vector<std::size_t> slots(net.hidden_count());
  for (std::size_t k = 0; k < slots.size(); ++k) slots[k] = net.first_hidden() + k;
  return relocate_hidden(net, slots);
}

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

}  // namespace detail

/// Plain-text dump: a header line `m n n_max N`, then the connectivity
/// matrix rows, the weight matrix rows and the bias vector (one entry per
/// hidden slot and output), all space separated. Hidden nodes are compacted
/// into the first N slots before writing.
inline void write_network(std::ostream& os, const Network& source) {
  const Network net = compacted(source);
  const std::size_t dim = net.node_count();
  os << net.inputs() << ' ' << net.outputs() << ' ' << net.max_hidden() << ' ' << net.hidden_count()
     << '\n';
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) os << (j ? " " : "") << (net.connected(i, j) ? 1 : 0);
    os << '\n';
  }
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) os << (j ? " " : "") << detail::format_double(net.weight(i, j));
    os << '\n';
  }
  for (std::size_t i = net.inputs(); i < dim; ++i)
    os << (i > net.inputs() ? " " : "") << detail::format_double(net.bias(i));
  os << '\n';
}

inline Network read_network(std::istream& is) {
  std::size_t m = 0, n = 0, n_max = 0, hidden = 0;
  if (!(is >> m >> n >> n_max >> hidden)) throw std::runtime_error("network dump: bad header");
  if (hidden > n_max) throw std::runtime_error("network dump: N exceeds n_max");
  Network net(m, n, n_max);
  for (std::size_t k = 0; k < hidden; ++k) net.activate_hidden(net.first_hidden() + k);
  const std::size_t dim = net.node_count();
  std::vector<int> conn(dim * dim);
  for (auto& c : conn)
    if (!(is >> c) || (c != 0 && c != 1)) throw std::runtime_error("network dump: bad connectivity entry");
  std::string token;
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      if (!(is >> token)) throw std::runtime_error("network dump: truncated weights");
      const double w = detail::parse_double(token);
      if (conn[i * dim + j]) {
        net.connect(i, j, w);
      } else if (w != 0.0) {
        throw std::runtime_error("network dump: weight without connection");
      }
    }
  }
  for (std::size_t i = m; i < dim; ++i) {
    if (!(is >> token)) throw std::runtime_error("network dump: truncated bias vector");
    const double b = detail::parse_double(token);
    if (net.is_active(i)) {
      net.set_bias(i, b);
    } else if (b != 0.0) {
      throw std::runtime_error("network dump: bias on inactive hidden slot");
    }
  }
  return net;
}

}  // namespace evonet
