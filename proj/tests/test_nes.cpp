#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "evonet/nes.hpp"
#include "fixtures.hpp"

using namespace evonet;

namespace {

NesIndividual ind(Genome g, double cost) { return {std::move(g), cost}; }

NesConfig small_config(std::uint64_t seed = 1) {
  NesConfig cfg;
  cfg.population_size = 8;
  cfg.subpopulations = 2;
  cfg.hidden_nodes = 3;
  cfg.max_generations = 40;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST(Sbmac, AlphaZero) {
  const Genome e{1.0, -2.0, 3.5}, v{0.25, 4.0, -1.0}, a(3, 0.0);
  const auto [c1, c2] = sbmac_pair(e, v, a);
  EXPECT_EQ(c1, v);
  EXPECT_EQ(c2, e);
}

TEST(Sbmac, AlphaHalfGivesMidpoint) {
  const Genome e{1.0, -2.0}, v{3.0, 4.0}, a(2, 0.5);
  const auto [c1, c2] = sbmac_pair(e, v, a);
  EXPECT_EQ(c1, (Genome{2.0, 1.0}));
  EXPECT_EQ(c2, (Genome{2.0, 1.0}));
}

TEST(Sbmac, WorkedExample) {
  const Genome e{2.0, 4.0}, v{0.0, 2.0}, a{0.25, 0.75};
  // child1_i = a_i e_i + (1 - a_i) v_i ; child2_i = (1 - a_i) e_i + a_i v_i
  const Genome expect1{0.25 * 2.0 + 0.75 * 0.0, 0.75 * 4.0 + 0.25 * 2.0};
  const Genome expect2{0.75 * 2.0 + 0.25 * 0.0, 0.25 * 4.0 + 0.75 * 2.0};
  const auto [c1, c2] = sbmac_pair(e, v, a);
  EXPECT_EQ(c1, expect1);
  EXPECT_EQ(c2, expect2);
  EXPECT_EQ(c1, (Genome{0.5, 3.5}));
  EXPECT_EQ(c2, (Genome{1.5, 2.5}));
}

TEST(Sbmac, ConservesSumExactlyAndStaysInHull) {
  Rng rng(1);
  for (int k = 0; k < 1000; ++k) {
    Genome e(25), v(25);
    for (auto& x : e) x = quantize(draw_uniform({-10, 10}, rng));
    for (auto& x : v) x = quantize(draw_uniform({-10, 10}, rng));
    const auto [c1, c2] = sbmac_pair(e, v, rng);
    for (std::size_t i = 0; i < e.size(); ++i) {
      EXPECT_EQ(c1[i] + c2[i], e[i] + v[i]);
      EXPECT_GE(c1[i], std::min(e[i], v[i]));
      EXPECT_LE(c1[i], std::max(e[i], v[i]));
      EXPECT_GE(c2[i], std::min(e[i], v[i]));
      EXPECT_LE(c2[i], std::max(e[i], v[i]));
      EXPECT_TRUE(on_grid(c1[i]) && on_grid(c2[i]));
    }
  }
}

TEST(Sbmac, FreshAlphaPerVariable) {
  Rng rng(2);
  const Genome e(50, 1.0), v(50, 0.0);
  auto [c1, c2] = sbmac_pair(e, v, rng);
  std::sort(c1.begin(), c1.end());
  EXPECT_GT(std::unique(c1.begin(), c1.end()) - c1.begin(), 40);
}

TEST(Sbmac, RejectsLengthMismatch) {
  Rng rng(3);
  EXPECT_THROW(sbmac_pair(Genome{1.0}, Genome{1.0, 2.0}, rng), std::invalid_argument);
}

TEST(TvmSigma, ZeroAtFinalGeneration) {
  NesConfig cfg;
  for (double r : {0.0, 1e-9, 0.3, 0.999, 1.0}) EXPECT_EQ(tvm_sigma(cfg.max_generations, cfg, r), 0.0);
}

TEST(TvmSigma, ZeroWhenRIsOne) {
  NesConfig cfg;
  for (std::size_t t : {0u, 10u, 250u, 499u}) EXPECT_EQ(tvm_sigma(t, cfg, 1.0), 0.0);
}

TEST(TvmSigma, GammaOneAtStart) {
  NesConfig cfg;
  cfg.gamma = 1.0;
  EXPECT_DOUBLE_EQ(tvm_sigma(0, cfg, 0.5), 0.5);
}

TEST(TvmSigma, DecaysOverTime) {
  NesConfig cfg;
  double last = 1.0;
  for (std::size_t t = 0; t <= cfg.max_generations; t += 50) {
    const double s = tvm_sigma(t, cfg, 0.2);
    EXPECT_LE(s, last);
    EXPECT_GE(s, 0.0);
    last = s;
  }
}

TEST(TvmSigma, PrintedFormSelectable) {
  NesConfig cfg;
  cfg.sigma_form = SigmaForm::printed;
  cfg.gamma = 1.0;
  cfg.max_generations = 10;
  EXPECT_DOUBLE_EQ(tvm_sigma(0, cfg, 0.5), 1.0 - 0.5 * (1.0 / 10.0));
}

TEST(TvmSigma, RejectsOutOfRange) {
  NesConfig cfg;
  cfg.max_generations = 5;
  EXPECT_THROW(tvm_sigma(6, cfg, 0.5), std::invalid_argument);
}

TEST(Tvm, WorkedExample) {
  const Genome child{0.0, 0.0};
  EXPECT_EQ(tvm_apply(child, 0.5, Genome{1.0, -2.0}, {-10, 10}), (Genome{0.5, -1.0}));
}

TEST(Tvm, DomainViolationReturnsChildWhole) {
  const Genome child{0.999, 0.2};
  EXPECT_EQ(tvm_apply(child, 1.0, Genome{0.5, 0.1}, {-1, 1}), child);
  EXPECT_EQ(tvm_apply(child, 1.0, Genome{0.0, -5.0}, {-1, 1}), child);
}

TEST(Tvm, FinalGenerationIsIdentity) {
  Rng rng(4);
  NesConfig cfg;
  NesIndividual c = ind({quantize(0.1), quantize(-0.2), quantize(0.3)}, 2.0);
  const auto out = tvm_mutate(c, cfg.max_generations, cfg, rng);
  EXPECT_EQ(out.genome, c.genome);
  EXPECT_EQ(out.cost, 2.0);
}

TEST(Tvm, MutatedChildNeedsEvaluation) {
  Rng rng(5);
  NesConfig cfg;
  const auto out = tvm_mutate(ind({0.1, -0.2, 0.3}, 2.0), 0, cfg, rng);
  EXPECT_NE(out.genome, (Genome{0.1, -0.2, 0.3}));
  EXPECT_FALSE(out.evaluated());
}

TEST(Subpopulation, EliteAndVirtualParent) {
  const std::vector<NesIndividual> pop{ind({1, 2}, 5), ind({3, 4}, 1)};
  const auto sp = make_subpopulation(pop, {0, 1});
  EXPECT_EQ(sp.elite, 1u);
  EXPECT_EQ(sp.virtual_parent, (Genome{1, 2}));
}

TEST(Subpopulation, MeanExcludesElite) {
  const std::vector<NesIndividual> pop{ind({0, 0}, 0), ind({2, 2}, 9), ind({4, 4}, 9)};
  const auto sp = make_subpopulation(pop, {0, 1, 2});
  EXPECT_EQ(sp.elite, 0u);
  EXPECT_EQ(sp.virtual_parent, (Genome{3, 3}));
}

TEST(Partition, BlocksCoverPopulation) {
  Rng rng(6);
  std::vector<NesIndividual> pop;
  for (int k = 0; k < 4; ++k) pop.push_back(ind({double(k)}, double(k)));
  const auto parts = partition_subpopulations(pop, 2, rng);
  ASSERT_EQ(parts.size(), 2u);
  std::vector<std::size_t> all;
  for (const auto& p : parts) {
    EXPECT_EQ(p.members.size(), 2u);
    all.insert(all.end(), p.members.begin(), p.members.end());
  }
  std::sort(all.begin(), all.end());
  EXPECT_EQ(all, (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_THROW(partition_subpopulations(pop, 3, rng), std::invalid_argument);
}

TEST(Partition, IsRandomised) {
  Rng rng(7);
  std::vector<NesIndividual> pop;
  for (int k = 0; k < 8; ++k) pop.push_back(ind({double(k)}, double(k)));
  std::set<std::vector<std::size_t>> seen;
  for (int k = 0; k < 20; ++k) seen.insert(partition_subpopulations(pop, 2, rng)[0].members);
  EXPECT_GT(seen.size(), 10u);
}

TEST(Alternate, KeepsLowestCosts) {
  auto out = alternate_generation({ind({0}, 3), ind({1}, 1)}, {ind({2}, 2), ind({3}, 0)});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].cost, 0);
  EXPECT_EQ(out[1].cost, 1);
}

TEST(Alternate, WorseChildrenLeaveParents) {
  const std::vector<NesIndividual> parents{ind({0}, 1), ind({1}, 2)};
  const auto out = alternate_generation(parents, {ind({2}, 5), ind({3}, 6)});
  EXPECT_EQ(out[0].genome, parents[0].genome);
  EXPECT_EQ(out[1].genome, parents[1].genome);
}

TEST(Alternate, TiesFavourParents) {
  const auto out = alternate_generation({ind({0}, 1), ind({1}, 1)}, {ind({2}, 1), ind({3}, 1)});
  EXPECT_EQ(out[0].genome, Genome{0});
  EXPECT_EQ(out[1].genome, Genome{1});
}

TEST(Alternate, RejectsUnevaluated) {
  EXPECT_THROW(alternate_generation({ind({0}, 1)}, {NesIndividual{{1.0}}}), std::invalid_argument);
  EXPECT_THROW(alternate_generation({ind({0}, 1)}, {}), std::invalid_argument);
}

TEST(NesConfig, Validation) {
  NesConfig c;
  EXPECT_NO_THROW(c.validate());
  c.population_size = 10;  // not a multiple of 4
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.subpopulations = 20;  // blocks of one
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.gamma = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.genome_domain = {-1000, 1000};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.init_range = {-20, 0};
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Evolve, ZeroGenerationsReturnsBestInitial) {
  const auto data = fixtures::threshold_split();
  NesConfig cfg = small_config();
  cfg.max_generations = 0;
  const auto tmpl = full_template(3, 2, cfg.hidden_nodes);
  NesEvolver evo(cfg, tmpl, data);
  evo.initialize();
  const double best = evo.population().front().cost;
  for (const auto& i : evo.population()) EXPECT_GE(i.cost, best);
  EXPECT_FALSE(evo.step());
  const auto r = evo.finish();
  EXPECT_TRUE(r.history.empty());
  EXPECT_DOUBLE_EQ(r.summary.train_error, best);
}

TEST(Evolve, DeterministicHistory) {
  const auto data = fixtures::threshold_split();
  const auto a = evolve_nes(small_config(9), data), b = evolve_nes(small_config(9), data);
  EXPECT_EQ(a.history, b.history);
  EXPECT_EQ(a.genome, b.genome);
}

TEST(Evolve, ElitismDomainAndSize) {
  const auto data = fixtures::threshold_split();
  NesConfig cfg = small_config(2);
  cfg.genome_domain = {-3, 3};
  const auto tmpl = full_template(3, 2, cfg.hidden_nodes);
  NesEvolver evo(cfg, tmpl, data);
  evo.initialize();
  while (evo.step()) {
    ASSERT_EQ(evo.population().size(), cfg.population_size);
    for (const auto& i : evo.population()) {
      EXPECT_DOUBLE_EQ(i.cost, genome_cost(tmpl, i.genome, data.train));
      for (double g : i.genome) EXPECT_TRUE(cfg.genome_domain.contains(g));
    }
  }
  const auto& h = evo.history();
  ASSERT_EQ(h.size(), cfg.max_generations);
  for (std::size_t g = 1; g < h.size(); ++g) EXPECT_LE(h[g].best_error, h[g - 1].best_error);
  EXPECT_LT(h.back().best_error, h.front().best_error);
}

TEST(Evolve, TemplateMustMatchHiddenCount) {
  const auto data = fixtures::threshold_split();
  EXPECT_THROW(NesEvolver(small_config(), full_template(3, 2, 2), data), std::invalid_argument);
}
