// Self-checks behind `evobench verify`. The invariants suite exercises the
// numerical and structural properties on random instances; the acceptance
// suite adds desk-scale experiments on the bundled data sets.
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "evonet/experiment.hpp"

#ifndef EVONET_SOURCE_DIR
#define EVONET_SOURCE_DIR "."
#endif

namespace evonet::verify {

enum class Suite { invariants, acceptance };

inline Suite parse_suite(const std::string& s) {
  if (s == "invariants") return Suite::invariants;
  if (s == "acceptance") return Suite::acceptance;
  throw std::invalid_argument("unknown suite '" + s + "' (expected invariants or acceptance)");
}

struct Options {
  std::filesystem::path root{EVONET_SOURCE_DIR};  // holds data/ and configs/
  std::size_t runs = 5;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  std::filesystem::path work_dir;  // scratch output; a temp dir when empty
};

struct Check {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace detail {

inline std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

inline Network random_small_network(Rng& rng, std::size_t max_inputs, std::size_t max_hidden_slots) {
  const std::size_t m = draw_index(1, max_inputs, rng);
  const std::size_t n = draw_index(1, 3, rng);
  const std::size_t n_max = draw_index(1, max_hidden_slots, rng);
  const std::size_t hidden = draw_index(1, n_max, rng);
  const double density = draw_uniform({0.3, 1.0}, rng);
  return random_network(m, n, n_max, {hidden, hidden}, density, {-2.0, 2.0}, BiasInit::uniform(-1.0, 1.0), rng);
}

inline std::vector<double> random_vector(std::size_t len, Range r, Rng& rng) {
  std::vector<double> v(len);
  for (auto& x : v) x = draw_uniform(r, rng);
  return v;
}

inline double half_squared_loss(const Network& net, std::span<const double> x, std::span<const double> d) {
  const auto y = forward(net, x);
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += 0.5 * (y[i] - d[i]) * (y[i] - d[i]);
  return s;
}

// Written without trace()/forward() so the error oracle shares no code
// with the library evaluation path.
inline std::vector<double> reference_outputs(const Network& net, std::span<const double> input) {
  const std::size_t dim = net.node_count();
  std::vector<double> x(dim, 0.0);
  for (std::size_t i = 0; i < net.inputs(); ++i) x[i] = input[i];
  for (std::size_t i = net.inputs(); i < dim; ++i) {
    if (!net.is_active(i)) continue;
    double z = net.bias(i) * 1.0;
    for (std::size_t j = 0; j < i; ++j)
      if (net.connected(i, j)) z += net.weight(i, j) * x[j];
    x[i] = 1.0 / (1.0 + std::exp(-z));
  }
  return {x.end() - static_cast<std::ptrdiff_t>(net.outputs()), x.end()};
}

inline double reference_error(const Network& net, const PatternSet& p) {
  double sum = 0.0;
  for (std::size_t t = 0; t < p.size(); ++t) {
    const auto y = reference_outputs(net, p.inputs[t]);
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double r = p.targets[t][i] - y[i];
      sum += r * r;
    }
  }
  return 100.0 * (p.o_max - p.o_min) / static_cast<double>(p.size() * p.output_width()) * sum;
}

// Error-free transformation: a + b == s + e exactly.
inline std::pair<double, double> two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double e = (a - (s - bb)) + (b - bb);
  return {s, e};
}

inline bool non_increasing(const EvolutionHistory& h, std::string& where) {
  for (std::size_t g = 1; g < h.size(); ++g)
    if (h[g].best_error > h[g - 1].best_error) {
      where = "generation " + std::to_string(h[g].generation) + ": " + fmt(h[g - 1].best_error, 17) + " -> " +
              fmt(h[g].best_error, 17);
      return false;
    }
  return true;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace detail

// ---- property checks -------------------------------------------------------

inline Check check_gradients(std::uint64_t seed) {
  Check c{1, "gradient", true, ""};
  const auto start = std::chrono::steady_clock::now();
  Rng rng(seed);
  const double h = 1e-5;
  double worst = 0.0;
  std::size_t compared = 0;
  for (int k = 0; k < 50; ++k) {
    const Network net = detail::random_small_network(rng, 5, 3);
    const auto x = detail::random_vector(net.inputs(), {-1.0, 1.0}, rng);
    const auto d = detail::random_vector(net.outputs(), {0.0, 1.0}, rng);
    const Gradient g = gradient(net, x, d);
    const std::size_t dim = net.node_count();
    auto compare = [&](double analytic, double numeric) {
      ++compared;
      const double scale = std::max(std::abs(analytic), std::abs(numeric));
      const double rel = scale == 0.0 ? 0.0 : std::abs(analytic - numeric) / scale;
      worst = std::max(worst, rel);
    };
    for (std::size_t i = net.inputs(); i < dim; ++i) {
      if (!net.is_active(i)) continue;
      for (std::size_t j = 0; j < i; ++j) {
        if (!net.legal(i, j)) continue;
        Network up = net, down = net;
        if (net.connected(i, j)) {
          up.set_weight(i, j, net.weight(i, j) + h);
          down.set_weight(i, j, net.weight(i, j) - h);
        } else {
          up.connect(i, j, h);
          down.connect(i, j, -h);
        }
        compare(g.weights[i * dim + j],
                (detail::half_squared_loss(up, x, d) - detail::half_squared_loss(down, x, d)) / (2.0 * h));
      }
      Network up = net, down = net;
      up.set_bias(i, net.bias(i) + h);
      down.set_bias(i, net.bias(i) - h);
      compare(g.bias[i], (detail::half_squared_loss(up, x, d) - detail::half_squared_loss(down, x, d)) / (2.0 * h));
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.pass = worst <= 1e-5 && secs < 10.0;
  c.detail = std::to_string(compared) + " partials over 50 nets, worst relative error " + detail::fmt(worst) +
             " (limit 1e-05), " + detail::fmt(secs, 3) + " s";
  return c;
}

inline Check check_error_oracle(std::uint64_t seed) {
  Check c{2, "error oracle", true, ""};
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Network net = detail::random_small_network(rng, 6, 4);
    PatternSet p;
    p.o_min = draw_uniform({-1.0, 0.0}, rng);
    p.o_max = draw_uniform({1.0, 2.0}, rng);
    const std::size_t T = draw_index(1, 30, rng);
    for (std::size_t t = 0; t < T; ++t) {
      p.inputs.push_back(detail::random_vector(net.inputs(), {-1.0, 1.0}, rng));
      p.targets.push_back(detail::random_vector(net.outputs(), {p.o_min, p.o_max}, rng));
    }
    worst = std::max(worst, std::abs(error_percentage(net, p) - detail::reference_error(net, p)));
  }
  c.pass = worst <= 1e-12;
  c.detail = "100 instances, worst |difference| " + detail::fmt(worst) + " (limit 1e-12)";
  return c;
}

inline Check check_split_preservation(std::uint64_t seed) {
  Check c{3, "split preservation", true, ""};
  Rng rng(seed);
  double worst = 0.0;
  int nets = 0;
  while (nets < 50) {
    const Network net = detail::random_small_network(rng, 5, 6);
    if (net.hidden_count() >= net.max_hidden()) continue;
    ++nets;
    const auto& hidden = net.hidden_nodes();
    const std::size_t node = hidden[draw_index(0, hidden.size() - 1, rng)];
    const double beta = draw_uniform({-2.0, 2.0}, rng);
    const Network split = *split_node_at(net, node, beta);
    split.check_invariants();
    if (split.hidden_count() != net.hidden_count() + 1) {
      c.pass = false;
      c.detail = "hidden count did not grow";
      return c;
    }
    for (int k = 0; k < 100; ++k) {
      const auto x = detail::random_vector(net.inputs(), {-1.0, 1.0}, rng);
      const auto a = forward(net, x), b = forward(split, x);
      for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    }
  }
  c.pass = worst <= 1e-9;
  c.detail = "50 nets x 100 inputs, worst |output difference| " + detail::fmt(worst) + " (limit 1e-09)";
  return c;
}

inline Check check_sbmac(std::uint64_t seed) {
  Check c{4, "sbmac conservation", true, ""};
  Rng rng(seed);
  std::size_t components = 0, broken_sum = 0, outside = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t len = draw_index(1, 60, rng);
    Genome e(len), v(len);
    for (std::size_t i = 0; i < len; ++i) {
      e[i] = quantize(draw_uniform({-10.0, 10.0}, rng));
      v[i] = quantize(draw_uniform({-10.0, 10.0}, rng));
    }
    const auto [c1, c2] = sbmac_pair(e, v, rng);
    for (std::size_t i = 0; i < len; ++i) {
      ++components;
      if (detail::two_sum(c1[i], c2[i]) != detail::two_sum(e[i], v[i])) ++broken_sum;
      const double lo = std::min(e[i], v[i]), hi = std::max(e[i], v[i]);
      if (c1[i] < lo || c1[i] > hi || c2[i] < lo || c2[i] > hi) ++outside;
    }
  }
  c.pass = broken_sum == 0 && outside == 0;
  c.detail = std::to_string(components) + " components over 1000 pairs, " + std::to_string(broken_sum) +
             " inexact sums, " + std::to_string(outside) + " outside the hull";
  return c;
}

inline Check check_tvm_boundary(std::uint64_t seed) {
  Check c{5, "tvm boundary", true, ""};
  Rng rng(seed);
  std::vector<std::string> failures;
  std::size_t sigma_checks = 0;
  for (std::size_t T : {1u, 7u, 100u, 500u}) {
    NesConfig cfg;
    cfg.max_generations = T;
    for (int k = 0; k < 250; ++k) {
      const double r = k == 0 ? 0.0 : k == 1 ? 1.0 : draw_uniform({0.0, 1.0}, rng);
      ++sigma_checks;
      if (tvm_sigma(T, cfg, r) != 0.0) failures.push_back("sigma(T_max) != 0 for r=" + detail::fmt(r, 17));
    }
    for (int k = 0; k < 100; ++k) {
      NesIndividual child;
      child.genome.resize(draw_index(1, 40, rng));
      for (auto& g : child.genome) g = quantize(draw_uniform(cfg.init_range, rng));
      child.cost = 1.0;
      if (tvm_mutate(child, T, cfg, rng).genome != child.genome) failures.push_back("offspring changed at T_max");
    }
  }
  // Forced violation: one coordinate pushed outside the domain.
  const Genome near{0.999, 0.0, -0.5};
  const Genome z{1.0, 0.1, 0.1};
  if (tvm_apply(near, 0.5, z, {-1.0, 1.0}) != near) failures.push_back("violation did not return the child");
  // Random mutations: either every variable is in the domain or the child is untouched.
  NesConfig cfg;
  cfg.genome_domain = {-1.0, 1.0};
  cfg.init_range = {-1.0, 1.0};
  cfg.max_generations = 10;
  std::size_t untouched = 0;
  for (int k = 0; k < 2000; ++k) {
    NesIndividual child;
    child.genome.resize(5);
    for (auto& g : child.genome) g = quantize(draw_uniform({-0.99, 0.99}, rng));
    const auto out = tvm_mutate(child, 0, cfg, rng);
    const bool inside = std::all_of(out.genome.begin(), out.genome.end(),
                                    [&](double g) { return cfg.genome_domain.contains(g); });
    if (out.genome == child.genome) ++untouched;
    else if (!inside) failures.push_back("mutated child left the domain");
  }
  if (untouched == 0) failures.push_back("no domain violation observed in 2000 wide mutations");
  c.pass = failures.empty();
  c.detail = failures.empty() ? std::to_string(sigma_checks) + " sigma draws zero at T_max; " +
                                    std::to_string(untouched) + "/2000 wide mutations returned unmutated"
                              : failures.front();
  return c;
}

// ---- run-level checks ------------------------------------------------------

struct Bundle {
  std::string name;  // breast-cancer, diabetes, heart
  std::string data;
};

inline const std::vector<Bundle>& bundles() {
  static const std::vector<Bundle> b{{"breast-cancer", "breast-cancer-wisconsin.data"},
                                     {"diabetes", "pima-indians-diabetes.data"},
                                     {"heart", "heart-statlog.data"}};
  return b;
}

inline ExperimentConfig bundled_config(const Options& opts, Algorithm algo, const std::string& dataset) {
  const auto it = std::find_if(bundles().begin(), bundles().end(), [&](const Bundle& b) { return b.name == dataset; });
  if (it == bundles().end()) throw std::invalid_argument("unknown bundled data set " + dataset);
  ExperimentConfig cfg;
  cfg.algorithm = algo;
  cfg.data_path = (opts.root / "data" / it->data).string();
  cfg.schema_path = (opts.root / "data" / (dataset + ".schema")).string();
  apply_config(cfg, KeyValues::load((opts.root / "configs" / (std::string(to_string(algo)) + "-" + dataset + ".cfg")).string()));
  cfg.runs = opts.runs;
  cfg.seed = opts.seed;
  cfg.jobs = opts.jobs;
  return cfg;
}

inline DataSplit bundled_data(const ExperimentConfig& cfg) {
  const auto schema = DatasetSchema::load(cfg.schema_path);
  const PatternSet all = prepare(load_csv(cfg.data_path, schema), schema);
  return partition(all, cfg.split.value_or(default_split(all.size())));
}

inline Check check_elitism(const Options& opts) {
  Check c{6, "elitism", true, ""};
  std::string where;
  // NES: 100 generations on diabetes.
  {
    ExperimentConfig cfg = bundled_config(opts, Algorithm::nes, "diabetes");
    NesConfig p = cfg.nes();
    p.max_generations = 100;
    p.seed = opts.seed;
    const DataSplit data = bundled_data(cfg);
    NesEvolver evo(p, full_template(data.train.input_width(), data.train.output_width(), p.hidden_nodes), data);
    evo.initialize();
    while (evo.step())
      if (evo.population().size() != p.population_size) {
        c.pass = false;
        c.detail = "nes population size changed";
        return c;
      }
    if (evo.history().size() != 100 || !detail::non_increasing(evo.history(), where)) {
      c.pass = false;
      c.detail = "nes best error increased at " + where;
      return c;
    }
  }
  // EPNet: complete runs on two data sets, two seeds each.
  std::size_t generations = 0;
  for (const char* name : {"breast-cancer", "diabetes"}) {
    ExperimentConfig cfg = bundled_config(opts, Algorithm::epnet, name);
    const DataSplit data = bundled_data(cfg);
    for (std::uint64_t s = 0; s < 2; ++s) {
      EpnetConfig p = cfg.epnet();
      p.seed = opts.seed + s;
      EpnetEvolver evo(p, data);
      evo.initialize();
      while (evo.step()) {
        if (evo.population().size() != p.population_size) {
          c.pass = false;
          c.detail = std::string("epnet population size changed on ") + name;
          return c;
        }
      }
      for (const auto& ind : evo.population()) ind.network.check_invariants();
      if (!detail::non_increasing(evo.history(), where)) {
        c.pass = false;
        c.detail = std::string("epnet best error increased on ") + name + " at " + where;
        return c;
      }
      generations += evo.history().size();
    }
  }
  c.detail = "nes 100 generations (mu=20) and 4 epnet runs (" + std::to_string(generations) +
             " generations, M=20): best error non-increasing, sizes constant";
  return c;
}

inline std::filesystem::path scratch_dir(const Options& opts, const std::string& leaf) {
  const auto base = opts.work_dir.empty() ? std::filesystem::temp_directory_path() / "evobench-verify" : opts.work_dir;
  const auto dir = base / leaf;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline Check check_determinism(const Options& opts) {
  Check c{7, "determinism", true, ""};
  std::size_t files = 0;
  for (Algorithm algo : {Algorithm::epnet, Algorithm::nes}) {
    ExperimentConfig cfg = bundled_config(opts, algo, "breast-cancer");
    std::visit([](auto& p) { p.max_generations = 25; }, cfg.params);
    cfg.runs = 3;
    cfg.dump_best = true;
    std::vector<std::filesystem::path> dirs;
    for (std::size_t jobs : {std::size_t{1}, std::max<std::size_t>(opts.jobs, 2)}) {
      cfg.jobs = jobs;
      cfg.out_dir = scratch_dir(opts, std::string("determinism-") + to_string(algo) + "-" + std::to_string(dirs.size()))
                        .string();
      run_experiment(cfg);
      dirs.emplace_back(cfg.out_dir);
    }
    for (const auto& entry : std::filesystem::directory_iterator(dirs[0])) {
      ++files;
      const auto other = dirs[1] / entry.path().filename();
      if (!std::filesystem::exists(other) || detail::read_file(entry.path()) != detail::read_file(other)) {
        c.pass = false;
        c.detail = std::string(to_string(algo)) + ": " + entry.path().filename().string() + " differs";
        return c;
      }
    }
    if (std::distance(std::filesystem::directory_iterator(dirs[1]), std::filesystem::directory_iterator{}) !=
        std::distance(std::filesystem::directory_iterator(dirs[0]), std::filesystem::directory_iterator{})) {
      c.pass = false;
      c.detail = std::string(to_string(algo)) + ": file sets differ";
      return c;
    }
  }
  c.detail = std::to_string(files) + " output files byte-identical across repeated runs (1 vs several threads)";
  return c;
}

// ---- experiments -----------------------------------------------------------

struct Experiments {
  ExperimentResult epnet_breast, nes_breast, epnet_diabetes, nes_diabetes;
  std::filesystem::path dir;
};

inline Experiments run_experiments(const Options& opts) {
  Experiments e;
  e.dir = scratch_dir(opts, "experiments");
  auto run = [&](Algorithm algo, const char* dataset) {
    ExperimentConfig cfg = bundled_config(opts, algo, dataset);
    cfg.out_dir = (e.dir / (std::string(to_string(algo)) + "-" + dataset)).string();
    return run_experiment(cfg);
  };
  e.epnet_breast = run(Algorithm::epnet, "breast-cancer");
  e.nes_breast = run(Algorithm::nes, "breast-cancer");
  e.epnet_diabetes = run(Algorithm::epnet, "diabetes");
  e.nes_diabetes = run(Algorithm::nes, "diabetes");
  return e;
}

inline double mean_of(const ExperimentResult& r, const std::function<double(const RunSummary&)>& f) {
  double s = 0.0;
  for (const auto& run : r.runs) s += f(run.summary);
  return s / static_cast<double>(r.runs.size());
}

inline std::string list_of(const ExperimentResult& r, const std::function<double(const RunSummary&)>& f) {
  std::string out;
  for (const auto& run : r.runs) out += (out.empty() ? "" : " ") + detail::fmt(f(run.summary));
  return "[" + out + "]";
}

inline Check check_diabetes_misclassification(const Experiments& e) {
  Check c{8, "diabetes misclassification", true, ""};
  auto miss = [](const RunSummary& s) { return s.test_misclassification; };
  const double ep = mean_of(e.epnet_diabetes, miss), ns = mean_of(e.nes_diabetes, miss);
  c.pass = ep >= 18.0 && ep <= 32.0 && ns >= 19.0 && ns <= 33.0;
  c.detail = "epnet mean " + detail::fmt(ep) + "% " + list_of(e.epnet_diabetes, miss) + " in [18,32]; nes mean " +
             detail::fmt(ns) + "% " + list_of(e.nes_diabetes, miss) + " in [19,33]";
  return c;
}

inline Check check_training_error(const Experiments& e) {
  Check c{9, "training error magnitude", true, ""};
  auto tr = [](const RunSummary& s) { return s.train_error; };
  const double eb = mean_of(e.epnet_breast, tr), nb = mean_of(e.nes_breast, tr), nd = mean_of(e.nes_diabetes, tr);
  c.pass = eb <= 0.05 && nb <= 0.05 && nd <= 0.03;
  c.detail = "breast epnet " + detail::fmt(eb) + " " + list_of(e.epnet_breast, tr) + ", breast nes " +
             detail::fmt(nb) + " " + list_of(e.nes_breast, tr) + " (limit 0.05); diabetes nes " + detail::fmt(nd) +
             " " + list_of(e.nes_diabetes, tr) + " (limit 0.03)";
  return c;
}

inline Check check_architecture(const Experiments& e) {
  Check c{10, "breast-cancer architecture", true, ""};
  auto hid = [](const RunSummary& s) { return static_cast<double>(s.hidden); };
  auto con = [](const RunSummary& s) { return static_cast<double>(s.connections); };
  for (const auto& run : e.epnet_breast.runs) {
    const auto& s = run.summary;
    if (s.hidden < 1 || s.hidden > 6 || s.connections < 8 || s.connections > 40) c.pass = false;
  }
  c.detail = "hidden " + list_of(e.epnet_breast, hid) + " in [1,6]; connections " + list_of(e.epnet_breast, con) +
             " in [8,40]";
  return c;
}

inline Check check_decay(const Experiments& e) {
  Check c{11, "nes decay", true, ""};
  // Decay is judged on the run-averaged best training error curve; per-run
  // ratios are listed alongside.
  double at10 = 0.0, at100 = 0.0;
  std::string ratios;
  for (const auto& run : e.nes_diabetes.runs) {
    const auto& h = run.history;
    if (h.size() < 100) {
      c.pass = false;
      c.detail = "nes run shorter than 100 generations";
      return c;
    }
    at10 += h[9].best_train_error;
    at100 += h[99].best_train_error;
    ratios += (ratios.empty() ? "" : " ") + detail::fmt(1.0 - h[99].best_train_error / h[9].best_train_error, 3);
  }
  const double drop = 1.0 - at100 / at10;
  // Both algorithms' history files must expose generation and training error
  // for side-by-side plotting.
  for (const char* leaf : {"epnet-diabetes", "nes-diabetes"}) {
    std::ifstream in(e.dir / leaf / "history_run0.csv");
    const auto h = read_history_csv(in);
    if (h.empty()) {
      c.pass = false;
      c.detail = std::string(leaf) + " history is empty";
      return c;
    }
  }
  c.pass = drop >= 0.30;
  c.detail = "mean best training error " + detail::fmt(at10 / e.nes_diabetes.runs.size()) + " at gen 10 -> " +
             detail::fmt(at100 / e.nes_diabetes.runs.size()) + " at gen 100, drop " + detail::fmt(100.0 * drop, 3) +
             "% (need >= 30%); per-run drops [" + ratios + "]; histories in " + (e.dir).string();
  return c;
}

// ---- driver ----------------------------------------------------------------

inline void print(std::ostream& os, const Check& c) {
  os << (c.pass ? "[PASS] " : "[FAIL] ") << c.id << ' ' << c.name << ": " << c.detail << std::endl;
}

/// Runs one check, turning an exception into a failure line.
inline Check guarded(int id, const char* name, const std::function<Check()>& f) {
  try {
    return f();
  } catch (const std::exception& ex) {
    return {id, name, false, std::string("error: ") + ex.what()};
  }
}

/// Runs the suite, printing one line per criterion as it completes.
inline std::vector<Check> run_suite(Suite suite, const Options& opts, std::ostream& os) {
  std::vector<Check> out;
  auto emit = [&](Check c) {
    print(os, c);
    out.push_back(std::move(c));
  };
  emit(guarded(1, "gradient", [&] { return check_gradients(opts.seed); }));
  emit(guarded(2, "error oracle", [&] { return check_error_oracle(opts.seed); }));
  emit(guarded(3, "split preservation", [&] { return check_split_preservation(opts.seed); }));
  emit(guarded(4, "sbmac conservation", [&] { return check_sbmac(opts.seed); }));
  emit(guarded(5, "tvm boundary", [&] { return check_tvm_boundary(opts.seed); }));
  emit(guarded(6, "elitism", [&] { return check_elitism(opts); }));
  emit(guarded(7, "determinism", [&] { return check_determinism(opts); }));
  if (suite == Suite::invariants) return out;

  Experiments e;
  std::string failure;
  try {
    e = run_experiments(opts);
  } catch (const std::exception& ex) {
    failure = std::string("experiments failed: ") + ex.what();
  }
  const std::vector<std::pair<int, const char*>> names{
      {8, "diabetes misclassification"}, {9, "training error magnitude"}, {10, "breast-cancer architecture"},
      {11, "nes decay"}};
  if (!failure.empty()) {
    for (const auto& [id, name] : names) emit({id, name, false, failure});
    return out;
  }
  emit(guarded(8, names[0].second, [&] { return check_diabetes_misclassification(e); }));
  emit(guarded(9, names[1].second, [&] { return check_training_error(e); }));
  emit(guarded(10, names[2].second, [&] { return check_architecture(e); }));
  emit(guarded(11, names[3].second, [&] { return check_decay(e); }));
  return out;
}

inline bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

}  // namespace evonet::verify
