#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "evonet/network.hpp"

using namespace evonet;

namespace {

// Long-double reference for the logistic function.
long double logistic(long double z) { return 1.0L / (1.0L + std::exp(-z)); }

Network chain_net() {
  // 1 input -> 1 hidden -> 1 output.
  Network net(1, 1, 1);
  net.activate_hidden(1);
  net.connect(1, 0, 1.0);
  net.connect(2, 1, 2.0);
  net.set_bias(1, 0.0);
  net.set_bias(2, 0.0);
  return net;
}

Network random_net(Rng& rng, double density = 0.7) {
  return random_network(4, 2, 5, {1, 5}, density, {-1.0, 1.0}, BiasInit::uniform(-0.5, 0.5), rng);
}

}  // namespace

TEST(Sigmoid, ZeroIsHalf) { EXPECT_EQ(sigmoid(0.0), 0.5); }

TEST(Sigmoid, SymmetryAroundHalf) {
  for (double z : {0.1, 1.0, 3.7, 20.0}) EXPECT_NEAR(sigmoid(z) + sigmoid(-z), 1.0, 1e-15);
}

TEST(Sigmoid, AtTwoMatchesReference) {
  EXPECT_NEAR(sigmoid(2.0), static_cast<double>(logistic(2.0L)), 2.3e-16);  // one ulp
  EXPECT_NEAR(sigmoid(2.0), 0.8807970779778823, 1e-15);
}

TEST(Sigmoid, SaturatesWithoutOverflow) {
  EXPECT_EQ(sigmoid(-1000.0), 0.0);
  EXPECT_EQ(sigmoid(1000.0), 1.0);
}

TEST(Forward, AllZeroWeightsGiveHalf) {
  Network net(3, 2, 2);
  net.activate_hidden(3);
  for (double v : forward(net, std::vector<double>{0.3, -2.0, 9.0})) EXPECT_EQ(v, 0.5);
}

TEST(Forward, DirectConnectionZeroInput) {
  Network net(1, 1, 0);
  net.connect(1, 0, 1.0);
  EXPECT_EQ(forward(net, std::vector<double>{0.0})[0], 0.5);
}

TEST(Forward, TwoLayerChainMatchesHandComposition) {
  const long double inner = logistic(2.0L);
  const long double expected = logistic(2.0L * inner);
  const double y = forward(chain_net(), std::vector<double>{2.0})[0];
  EXPECT_NEAR(y, static_cast<double>(expected), 1e-15);
  EXPECT_NEAR(2.0 * sigmoid(2.0), 1.7615941559557649, 1e-15);
}

TEST(Forward, BiasUsesUnitSource) {
  Network net(1, 1, 0);
  net.set_bias(1, 0.7);
  EXPECT_DOUBLE_EQ(forward(net, std::vector<double>{5.0})[0], sigmoid(0.7 * kBiasSource));
}

TEST(Forward, RejectsWrongInputLength) {
  EXPECT_THROW(forward(chain_net(), std::vector<double>{1.0, 2.0}), std::invalid_argument);
}

TEST(Forward, IsBitwiseRepeatable) {
  Rng rng(11);
  const Network net = random_net(rng);
  const std::vector<double> x{0.1, 0.2, -0.3, 0.9};
  EXPECT_EQ(forward(net, x), forward(net, x));
}

TEST(Trace, InputsCopiedAndFullLength) {
  Rng rng(3);
  const Network net = random_net(rng);
  const std::vector<double> x{0.25, -1.5, 3.0, 0.0};
  const auto t = trace(net, x);
  ASSERT_EQ(t.node_values.size(), net.node_count());
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(t.node_values[i], x[i]);
}

TEST(Forward, MonotoneInSinglePositivePath) {
  double last = 0.0;
  for (double w = 0.0; w <= 5.0; w += 0.25) {
    Network net = chain_net();
    net.set_weight(2, 1, w);
    const double y = forward(net, std::vector<double>{1.0})[0];
    EXPECT_GE(y, last);
    last = y;
  }
}

TEST(Network, RejectsIllegalConnections) {
  Network net(2, 1, 2);
  net.activate_hidden(2);
  EXPECT_THROW(net.connect(0, 1, 1.0), std::invalid_argument);  // into an input
  EXPECT_THROW(net.connect(2, 2, 1.0), std::invalid_argument);  // self loop
  EXPECT_THROW(net.connect(2, 4, 1.0), std::invalid_argument);  // backwards
  EXPECT_THROW(net.connect(4, 3, 1.0), std::invalid_argument);  // inactive source
  EXPECT_NO_THROW(net.connect(4, 0, 1.0));                      // input -> output
}

TEST(Network, OutputToLaterOutputIsLegal) {
  Network net(1, 2, 0);
  EXPECT_TRUE(net.legal(2, 1));
  EXPECT_FALSE(net.legal(1, 2));
}

TEST(Network, DeactivateClearsRowsAndColumns) {
  Rng rng(5);
  Network net = random_network(3, 2, 4, {3, 3}, 1.0, {-1.0, 1.0}, BiasInit::constant(-1.5), rng);
  const std::size_t h = net.hidden_nodes()[1];
  net.deactivate_hidden(h);
  for (std::size_t k = 0; k < net.node_count(); ++k) {
    EXPECT_FALSE(net.connected(h, k));
    EXPECT_FALSE(net.connected(k, h));
  }
  EXPECT_NO_THROW(net.check_invariants());
}

TEST(RandomNetwork, DensityOneIsFullyConnected) {
  Rng rng(1);
  for (int k = 0; k < 20; ++k) {
    const Network net = random_network(9, 2, 10, {1, 3}, 1.0, {-0.5, 0.5}, BiasInit::constant(-1.5), rng);
    EXPECT_TRUE(net.virtual_connections().empty());
    EXPECT_GE(net.hidden_count(), 1u);
    EXPECT_LE(net.hidden_count(), 3u);
    for (auto node : biased_nodes(net)) EXPECT_EQ(net.bias(node), -1.5);
  }
}

TEST(RandomNetwork, DensityZeroGivesBiasOnlyOutputs) {
  Rng rng(2);
  const Network net = random_network(3, 2, 4, {2, 2}, 0.0, {-0.5, 0.5}, BiasInit::constant(0.4), rng);
  EXPECT_EQ(net.connection_count(), 0u);
  for (double y : forward(net, std::vector<double>{1.0, 2.0, 3.0})) EXPECT_DOUBLE_EQ(y, sigmoid(0.4));
}

TEST(RandomNetwork, FixedHiddenRange) {
  Rng rng(4);
  EXPECT_EQ(random_network(9, 2, 10, {3, 3}, 1.0, {-0.5, 0.5}, BiasInit::constant(0), rng).hidden_count(), 3u);
}

TEST(RandomNetwork, HiddenCountCoversRange) {
  Rng rng(9);
  std::vector<int> seen(6, 0);
  for (int k = 0; k < 400; ++k)
    ++seen[random_network(2, 1, 5, {2, 5}, 0.5, {-1, 1}, BiasInit::constant(0), rng).hidden_count()];
  EXPECT_EQ(seen[0] + seen[1], 0);
  for (int h = 2; h <= 5; ++h) EXPECT_GT(seen[h], 60);
}

TEST(RandomNetwork, WeightsInsideRangeAndInvariantsHold) {
  Rng rng(21);
  for (int k = 0; k < 50; ++k) {
    const Network net = random_net(rng, 0.5);
    EXPECT_NO_THROW(net.check_invariants());
    for (const auto& c : net.connections()) {
      EXPECT_GE(net.weight(c.to, c.from), -1.0);
      EXPECT_LE(net.weight(c.to, c.from), 1.0);
    }
  }
}

TEST(RandomNetwork, RejectsBadParameters) {
  Rng rng(0);
  EXPECT_THROW(random_network(2, 1, 3, {0, 2}, 1.0, {-1, 1}, BiasInit::constant(0), rng), std::invalid_argument);
  EXPECT_THROW(random_network(2, 1, 3, {2, 4}, 1.0, {-1, 1}, BiasInit::constant(0), rng), std::invalid_argument);
  EXPECT_THROW(random_network(2, 1, 3, {1, 2}, 1.5, {-1, 1}, BiasInit::constant(0), rng), std::invalid_argument);
  EXPECT_THROW(random_network(2, 1, 3, {1, 2}, 1.0, {1, -1}, BiasInit::constant(0), rng), std::invalid_argument);
}

TEST(Genome, LengthCountsConnectionsAndBiases) {
  Network net(2, 1, 1);
  net.activate_hidden(2);
  net.connect(2, 0, 0.1);
  net.connect(3, 2, 0.2);
  net.connect(3, 1, 0.3);
  EXPECT_EQ(genome_length(net), 5u);  // 3 connections + 2 biases
}

TEST(Genome, LayoutIsRowMajorThenBiases) {
  Network net(2, 1, 1);
  net.activate_hidden(2);
  net.connect(2, 1, 0.5);
  net.connect(3, 0, 0.25);
  net.connect(3, 2, -1.0);
  net.set_bias(2, 7.0);
  net.set_bias(3, 8.0);
  EXPECT_EQ(flatten(net), (std::vector<double>{0.5, 0.25, -1.0, 7.0, 8.0}));
}

TEST(Genome, RoundTripIsIdentity) {
  Rng rng(8);
  for (int k = 0; k < 30; ++k) {
    const Network net = random_net(rng);
    Network zeroed = unflatten(net, std::vector<double>(genome_length(net), 0.0));
    EXPECT_EQ(unflatten(zeroed, flatten(net)), net);
  }
}

TEST(Genome, ZeroGenomeGivesHalfEverywhere) {
  const Network tmpl = full_template(3, 2, 4);
  const Network net = unflatten(tmpl, std::vector<double>(genome_length(tmpl), 0.0));
  for (double y : forward(net, std::vector<double>{1, -1, 3})) EXPECT_EQ(y, 0.5);
}

TEST(Genome, RejectsWrongLength) {
  const Network tmpl = full_template(2, 1, 1);
  EXPECT_THROW(unflatten(tmpl, std::vector<double>(3, 0.0)), std::invalid_argument);
}

TEST(FullTemplate, EveryLegalPairPresent) {
  const Network t = full_template(9, 2, 3);
  EXPECT_TRUE(t.virtual_connections().empty());
  // hidden: 9, 10, 11 incoming; outputs: 12, 13.
  EXPECT_EQ(t.connection_count(), 9u + 10u + 11u + 12u + 13u);
}

TEST(Relocate, PreservesFunction) {
  Rng rng(13);
  Network net = random_network(3, 2, 6, {3, 3}, 1.0, {-1, 1}, BiasInit::uniform(-1, 1), rng);
  const std::vector<std::size_t> slots{4, 6, 8};
  const Network moved = relocate_hidden(net, slots);
  EXPECT_EQ(moved.hidden_nodes(), slots);
  const std::vector<double> x{0.3, 0.1, -0.7};
  EXPECT_EQ(forward(net, x), forward(moved, x));
  EXPECT_EQ(compacted(moved), net);
}

TEST(Dump, RoundTrip) {
  Rng rng(17);
  for (int k = 0; k < 10; ++k) {
    const Network net = random_net(rng);
    std::stringstream ss;
    write_network(ss, net);
    EXPECT_EQ(read_network(ss), compacted(net));
  }
}

TEST(Dump, HeaderAndShape) {
  std::stringstream ss;
  write_network(ss, chain_net());
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header, "1 1 1 1");
  std::size_t lines = 0;
  for (std::string l; std::getline(ss, l);) ++lines;
  EXPECT_EQ(lines, 3u + 3u + 1u);  // connectivity rows, weight rows, bias vector
}

TEST(Dump, RejectsWeightWithoutConnection) {
  std::stringstream ss("1 1 0 0\n0 0\n0 0\n0 0\n0.5 0\n0\n");
  EXPECT_THROW(read_network(ss), std::runtime_error);
}
