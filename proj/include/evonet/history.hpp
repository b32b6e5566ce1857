#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "evonet/patterns.hpp"

namespace evonet {

/// One row of an evolution history. best_error is the quantity each
/// algorithm selects on (validation error for EPNet, training cost for NES);
/// both the training and validation error of the best individual are kept so
/// either curve can be plotted.
struct GenerationRecord {
  std::size_t generation = 0;
  double best_error = 0.0;
  double mean_error = 0.0;
  std::size_t best_connections = 0;
  std::size_t best_hidden = 0;
  double best_train_error = 0.0;
  double best_validation_error = 0.0;
  std::string mutation;

  bool operator==(const GenerationRecord&) const = default;
};

using EvolutionHistory = std::vector<GenerationRecord>;

/// End-of-run metrics of the returned network. Errors are squared error
/// percentages; accuracies and misclassification are percentages.
struct RunSummary {
  double train_error = 0.0;
  double validation_error = 0.0;
  double test_error = 0.0;
  double validation_accuracy = 0.0;
  double test_accuracy = 0.0;
  double test_misclassification = 0.0;
  std::size_t connections = 0;
  std::size_t hidden = 0;
  std::size_t generations = 0;

  bool operator==(const RunSummary&) const = default;
};

inline RunSummary summarize(const Network& net, const DataSplit& data, std::size_t generations) {
  RunSummary s;
  s.train_error = error_percentage(net, data.train);
  s.validation_error = error_percentage(net, data.validation);
  s.test_error = error_percentage(net, data.test);
  s.validation_accuracy = accuracy(net, data.validation);
  s.test_misclassification = misclassification_rate(net, data.test);
  s.test_accuracy = 100.0 - s.test_misclassification;
  s.connections = net.connection_count();
  s.hidden = net.hidden_count();
  s.generations = generations;
  return s;
}

}  // namespace evonet
