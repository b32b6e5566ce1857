#pragma once

#include "evonet/patterns.hpp"

namespace fixtures {

// Two-class problem: class 2 when the input mean exceeds 0.5. Targets 1-of-2.
inline evonet::PatternSet threshold_set(std::size_t count, std::size_t inputs, evonet::Rng& rng) {
  evonet::PatternSet p;
  for (std::size_t t = 0; t < count; ++t) {
    std::vector<double> x(inputs);
    double mean = 0.0;
    for (auto& v : x) {
      v = evonet::draw_uniform({0.0, 1.0}, rng);
      mean += v / static_cast<double>(inputs);
    }
    p.inputs.push_back(std::move(x));
    p.targets.push_back(mean > 0.5 ? std::vector<double>{0.0, 1.0} : std::vector<double>{1.0, 0.0});
  }
  return p;
}

inline evonet::DataSplit threshold_split(std::uint64_t seed = 99, std::size_t inputs = 3) {
  evonet::Rng rng(seed);
  return {threshold_set(60, inputs, rng), threshold_set(30, inputs, rng), threshold_set(30, inputs, rng)};
}

}  // namespace fixtures
