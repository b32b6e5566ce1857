#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "evonet/network.hpp"

namespace evonet {

/// Input/target pairs plus the output coding range used by the error
/// percentage (o_max, o_min).
struct PatternSet {
  std::vector<std::vector<double>> inputs;
  std::vector<std::vector<double>> targets;
  double o_max = 1.0;
  double o_min = 0.0;

  std::size_t size() const { return inputs.size(); }
  bool empty() const { return inputs.empty(); }
  std::size_t input_width() const { return inputs.empty() ? 0 : inputs.front().size(); }
  std::size_t output_width() const { return targets.empty() ? 0 : targets.front().size(); }

  void validate() const {
    if (inputs.empty()) throw std::invalid_argument("pattern set is empty");
    if (inputs.size() != targets.size()) throw std::invalid_argument("input/target count mismatch");
    if (o_max < o_min) throw std::invalid_argument("o_max < o_min");
    for (std::size_t t = 0; t < size(); ++t) {
      if (inputs[t].size() != input_width() || targets[t].size() != output_width())
        throw std::invalid_argument("ragged pattern " + std::to_string(t));
      for (double d : targets[t])
        if (d < o_min || d > o_max) throw std::invalid_argument("target outside [o_min, o_max]");
    }
  }

  bool operator==(const PatternSet&) const = default;
};

/// Concatenation of two pattern sets sharing the same coding range.
inline PatternSet concatenate(const PatternSet& a, const PatternSet& b) {
  PatternSet out = a;
  out.inputs.insert(out.inputs.end(), b.inputs.begin(), b.inputs.end());
  out.targets.insert(out.targets.end(), b.targets.begin(), b.targets.end());
  out.o_max = std::max(a.o_max, b.o_max);
  out.o_min = std::min(a.o_min, b.o_min);
  return out;
}

/// Consecutive train / validation / test partitions of one dataset.
struct DataSplit {
  PatternSet train;
  PatternSet validation;
  PatternSet test;
};

inline void check_dimensions(const Network& net, const PatternSet& patterns) {
  if (patterns.empty()) throw std::invalid_argument("pattern set is empty");
  if (patterns.input_width() != net.inputs() || patterns.output_width() != net.outputs())
    throw std::invalid_argument("network/pattern dimension mismatch");
}

/// Squared error percentage:
///   E = 100 * (o_max - o_min) / (T * n) * sum_t sum_i (d_i(t) - y_i(t))^2
inline double error_percentage(const Network& net, const PatternSet& patterns) {
  check_dimensions(net, patterns);
  double sum = 0.0;
  for (std::size_t t = 0; t < patterns.size(); ++t) {
    const auto y = forward(net, patterns.inputs[t]);
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double r = patterns.targets[t][i] - y[i];
      sum += r * r;
    }
  }
  const double T = static_cast<double>(patterns.size());
  const double n = static_cast<double>(net.outputs());
  return 100.0 * (patterns.o_max - patterns.o_min) / (T * n) * sum;
}

/// Winner-takes-all; ties go to the lowest index. Returns a 0-based class.
inline std::size_t classify(std::span<const double> output) {
  if (output.empty()) throw std::invalid_argument("empty output vector");
  return static_cast<std::size_t>(std::max_element(output.begin(), output.end()) - output.begin());
}

/// Percentage of patterns whose winning output differs from the target's.
inline double misclassification_rate(const Network& net, const PatternSet& patterns) {
  check_dimensions(net, patterns);
  std::size_t wrong = 0;
  for (std::size_t t = 0; t < patterns.size(); ++t)
    if (classify(forward(net, patterns.inputs[t])) != classify(patterns.targets[t])) ++wrong;
  return 100.0 * static_cast<double>(wrong) / static_cast<double>(patterns.size());
}

inline double accuracy(const Network& net, const PatternSet& patterns) {
  return 100.0 - misclassification_rate(net, patterns);
}

}  // namespace evonet
