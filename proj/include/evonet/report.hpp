#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "evonet/history.hpp"
#include "evonet/keyvalue.hpp"

namespace evonet {

struct ColumnStats {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Mean, sample standard deviation (n - 1; zero for a single value), min, max.
inline ColumnStats describe(std::string name, std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("cannot aggregate an empty column");
  ColumnStats s{std::move(name)};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double n = static_cast<double>(values.size());
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  // Summation rounding can push the mean of identical values a hair outside [min, max].
  s.mean = std::clamp(sum / n, s.min, s.max);
  if (values.size() > 1 && s.min < s.max) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

/// Column-wise statistics of equally long rows.
inline std::vector<ColumnStats> aggregate(const std::vector<std::string>& names,
                                          const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("cannot aggregate zero rows");
  std::vector<ColumnStats> out;
  for (std::size_t c = 0; c < names.size(); ++c) {
    std::vector<double> col;
    for (const auto& r : rows) {
      if (r.size() != names.size()) throw std::invalid_argument("ragged rows");
      col.push_back(r[c]);
    }
    out.push_back(describe(names[c], col));
  }
  return out;
}

inline const std::vector<std::string>& summary_fields() {
  static const std::vector<std::string> names{
      "train_error",   "validation_error",       "test_error",  "validation_accuracy", "test_accuracy",
      "test_misclassification", "connections", "hidden", "generations"};
  return names;
}

inline std::vector<double> summary_values(const RunSummary& s) {
  return {s.train_error,   s.validation_error,
          s.test_error,    s.validation_accuracy,
          s.test_accuracy, s.test_misclassification,
          static_cast<double>(s.connections), static_cast<double>(s.hidden),
          static_cast<double>(s.generations)};
}

inline std::vector<ColumnStats> aggregate_runs(std::span<const RunSummary> runs) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : runs) rows.push_back(summary_values(r));
  return aggregate(summary_fields(), rows);
}

namespace detail {

inline std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

inline void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("I/O error writing " + path.string());
}

inline std::vector<std::string> read_csv_rows(std::istream& is, const std::string& expected_header) {
  std::string line;
  if (!std::getline(is, line) || trim(line) != expected_header)
    throw std::runtime_error("unexpected CSV header: '" + line + "'");
  std::vector<std::string> rows;
  while (std::getline(is, line))
    if (!trim(line).empty()) rows.push_back(line);
  return rows;
}

}  // namespace detail

inline constexpr const char* kHistoryHeader =
    "generation,best_error,mean_error,best_connections,best_hidden,best_train_error,best_validation_error,mutation";

inline void write_history_csv(std::ostream& os, const EvolutionHistory& history) {
  using detail::format_double;
  os << kHistoryHeader << '\n';
  for (const auto& r : history)
    os << r.generation << ',' << format_double(r.best_error) << ',' << format_double(r.mean_error) << ','
       << r.best_connections << ',' << r.best_hidden << ',' << format_double(r.best_train_error) << ','
       << format_double(r.best_validation_error) << ',' << r.mutation << '\n';
}

inline EvolutionHistory read_history_csv(std::istream& is) {
  EvolutionHistory history;
  for (const auto& line : detail::read_csv_rows(is, kHistoryHeader)) {
    const auto f = split(line, ',');
    if (f.size() != 8) throw std::runtime_error("history row has " + std::to_string(f.size()) + " fields");
    GenerationRecord r;
    r.generation = kv::to_uint("generation", f[0]);
    r.best_error = detail::parse_double(f[1]);
    r.mean_error = detail::parse_double(f[2]);
    r.best_connections = kv::to_uint("best_connections", f[3]);
    r.best_hidden = kv::to_uint("best_hidden", f[4]);
    r.best_train_error = detail::parse_double(f[5]);
    r.best_validation_error = detail::parse_double(f[6]);
    r.mutation = f[7];
    history.push_back(std::move(r));
  }
  return history;
}

inline void emit_history_csv(const EvolutionHistory& history, const std::filesystem::path& path) {
  auto out = detail::open_for_write(path);
  write_history_csv(out, history);
  detail::finish_write(out, path);
}

inline std::string runs_header() {
  std::string h = "run,seed";
  for (const auto& f : summary_fields()) h += "," + f;
  return h;
}

struct RunRow {
  std::size_t run = 0;
  std::uint64_t seed = 0;
  RunSummary summary;

  bool operator==(const RunRow&) const = default;
};

inline void write_runs_csv(std::ostream& os, std::span<const RunRow> rows) {
  os << runs_header() << '\n';
  for (const auto& r : rows) {
    const auto& s = r.summary;
    os << r.run << ',' << r.seed << ',' << detail::format_double(s.train_error) << ','
       << detail::format_double(s.validation_error) << ',' << detail::format_double(s.test_error) << ','
       << detail::format_double(s.validation_accuracy) << ',' << detail::format_double(s.test_accuracy) << ','
       << detail::format_double(s.test_misclassification) << ',' << s.connections << ',' << s.hidden << ','
       << s.generations << '\n';
  }
}

inline std::vector<RunRow> read_runs_csv(std::istream& is) {
  std::vector<RunRow> rows;
  for (const auto& line : detail::read_csv_rows(is, runs_header())) {
    const auto f = split(line, ',');
    if (f.size() != 11) throw std::runtime_error("runs row has " + std::to_string(f.size()) + " fields");
    RunRow r;
    r.run = kv::to_uint("run", f[0]);
    r.seed = kv::to_uint("seed", f[1]);
    r.summary.train_error = detail::parse_double(f[2]);
    r.summary.validation_error = detail::parse_double(f[3]);
    r.summary.test_error = detail::parse_double(f[4]);
    r.summary.validation_accuracy = detail::parse_double(f[5]);
    r.summary.test_accuracy = detail::parse_double(f[6]);
    r.summary.test_misclassification = detail::parse_double(f[7]);
    r.summary.connections = kv::to_uint("connections", f[8]);
    r.summary.hidden = kv::to_uint("hidden", f[9]);
    r.summary.generations = kv::to_uint("generations", f[10]);
    rows.push_back(r);
  }
  return rows;
}

/// One row per metric: metric,mean,sd,min,max.
inline void write_aggregate_csv(std::ostream& os, std::span<const ColumnStats> stats) {
  using detail::format_double;
  os << "metric,mean,sd,min,max\n";
  for (const auto& s : stats)
    os << s.name << ',' << format_double(s.mean) << ',' << format_double(s.sd) << ',' << format_double(s.min)
       << ',' << format_double(s.max) << '\n';
}

/// Human-readable report: header lines, per-run table, then Mean/SD/Min/Max.
inline void write_report_text(std::ostream& os, const std::string& title, std::span<const RunRow> rows) {
  std::vector<RunSummary> summaries;
  for (const auto& r : rows) summaries.push_back(r.summary);
  const auto stats = aggregate_runs(summaries);
  const auto& names = summary_fields();

  os << title << '\n' << std::string(title.size(), '=') << "\n\n";
  os << "runs: " << rows.size() << "\n\n";
  os << std::left << std::setw(6) << "run" << std::setw(12) << "seed";
  for (const auto& n : names) os << std::right << std::setw(24) << n;
  os << '\n';
  os << std::fixed << std::setprecision(6);
  for (const auto& r : rows) {
    os << std::left << std::setw(6) << r.run << std::setw(12) << r.seed << std::right;
    for (double v : summary_values(r.summary)) os << std::setw(24) << v;
    os << '\n';
  }
  os << '\n' << std::left << std::setw(24) << "metric" << std::right << std::setw(16) << "Mean" << std::setw(16)
     << "SD" << std::setw(16) << "Min" << std::setw(16) << "Max" << '\n';
  for (const auto& s : stats)
    os << std::left << std::setw(24) << s.name << std::right << std::setw(16) << s.mean << std::setw(16) << s.sd
       << std::setw(16) << s.min << std::setw(16) << s.max << '\n';
  os.unsetf(std::ios::floatfield);
}

struct RunReport {
  std::string title;
  std::vector<RunRow> runs;
};

/// Writes runs.csv, aggregate.csv and report.txt into `dir`.
inline void emit_report(const RunReport& report, const std::filesystem::path& dir) {
  {
    const auto path = dir / "runs.csv";
    auto out = detail::open_for_write(path);
    write_runs_csv(out, report.runs);
    detail::finish_write(out, path);
  }
  std::vector<RunSummary> summaries;
  for (const auto& r : report.runs) summaries.push_back(r.summary);
  {
    const auto path = dir / "aggregate.csv";
    auto out = detail::open_for_write(path);
    write_aggregate_csv(out, aggregate_runs(summaries));
    detail::finish_write(out, path);
  }
  {
    const auto path = dir / "report.txt";
    auto out = detail::open_for_write(path);
    write_report_text(out, report.title, report.runs);
    detail::finish_write(out, path);
  }
}

}  // namespace evonet
