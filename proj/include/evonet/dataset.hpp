// Loading and preparation of UCI-style classification files: comma
// separated rows, `?` for missing values, optional ID columns and one class
// column. Preparation runs impute -> categorical expansion -> rescale ->
// 1-of-m target encoding -> consecutive partitioning in file order.
#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "evonet/keyvalue.hpp"
#include "evonet/patterns.hpp"

namespace evonet {

/// Schema file keys: name, inputs, classes, class_col, id_cols, missing,
/// labels, rows, onehot_cols, rescale.
struct DatasetSchema {
  std::string name;
  std::size_t inputs = 0;
  std::size_t classes = 0;
  long long class_col = -1;  // 0-based file column; negative counts from the end
  std::vector<std::size_t> id_cols;
  std::string missing = "?";
  std::vector<std::string> labels;  // label tokens of classes 1..m; empty means "1".."m"
  std::size_t rows = 0;             // expected example count; 0 skips the check
  std::vector<std::size_t> onehot_cols;  // 0-based input attributes to expand
  bool rescale = true;

  std::size_t arity() const { return id_cols.size() + inputs + 1; }

  std::size_t class_column() const {
    const auto a = static_cast<long long>(arity());
    const long long c = class_col < 0 ? a + class_col : class_col;
    if (c < 0 || c >= a) throw std::invalid_argument("class_col outside the row");
    return static_cast<std::size_t>(c);
  }

  void validate() const {
    if (inputs < 1) throw std::invalid_argument("schema: inputs must be >= 1");
    if (classes < 2) throw std::invalid_argument("schema: classes must be >= 2");
    if (!labels.empty() && labels.size() != classes)
      throw std::invalid_argument("schema: labels must list exactly `classes` tokens");
    const std::size_t cc = class_column();
    for (auto c : id_cols)
      if (c >= arity() || c == cc) throw std::invalid_argument("schema: bad id column");
    for (auto c : onehot_cols)
      if (c >= inputs) throw std::invalid_argument("schema: onehot column outside the inputs");
  }

  static DatasetSchema from(const KeyValues& kvs) {
    DatasetSchema s;
    for (const auto& [key, value] : kvs.entries()) {
      if (key == "name") s.name = value;
      else if (key == "inputs") s.inputs = kv::to_uint(key, value);
      else if (key == "classes") s.classes = kv::to_uint(key, value);
      else if (key == "class_col") s.class_col = kv::to_int(key, value);
      else if (key == "id_cols") s.id_cols = kv::to_index_list(key, value);
      else if (key == "missing") s.missing = value;
      else if (key == "labels") s.labels = value.empty() ? std::vector<std::string>{} : split(value, ',');
      else if (key == "rows") s.rows = kv::to_uint(key, value);
      else if (key == "onehot_cols") s.onehot_cols = kv::to_index_list(key, value);
      else if (key == "rescale") s.rescale = kv::to_bool(key, value);
      else throw std::runtime_error(kvs.source() + ": unknown schema key '" + key + "'");
    }
    s.validate();
    return s;
  }

  static DatasetSchema load(const std::string& path) { return from(KeyValues::load(path)); }
};

struct SplitSpec {
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;

  std::size_t total() const { return train + validation + test; }
  bool operator==(const SplitSpec&) const = default;
};

/// Half for training, the remainder shared between validation and test.
inline SplitSpec default_split(std::size_t rows) {
  const std::size_t train = rows / 2;
  const std::size_t validation = (rows - train) / 2;
  return {train, validation, rows - train - validation};
}

/// Input attributes with per-cell missing flags and raw class tokens.
struct Table {
  std::vector<std::vector<double>> inputs;
  std::vector<std::vector<std::uint8_t>> missing;
  std::vector<std::string> labels;

  std::size_t rows() const { return inputs.size(); }
  std::size_t width() const { return inputs.empty() ? 0 : inputs.front().size(); }
  bool has_missing() const {
    for (const auto& r : missing)
      if (std::find(r.begin(), r.end(), std::uint8_t{1}) != r.end()) return true;
    return false;
  }
  bool operator==(const Table&) const = default;
};

inline Table parse_csv(std::istream& is, const DatasetSchema& schema, const std::string& source = "<input>") {
  schema.validate();
  const std::size_t arity = schema.arity();
  const std::size_t class_col = schema.class_column();
  std::vector<bool> skip(arity, false);
  for (auto c : schema.id_cols) skip[c] = true;
  skip[class_col] = true;

  Table table;
  std::string line;
  std::size_t row = 0;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    ++row;
    const auto cells = split(line, ',');
    if (cells.size() != arity)
      throw std::runtime_error(source + ": row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                               " columns, expected " + std::to_string(arity));
    std::vector<double> x;
    std::vector<std::uint8_t> miss;
    for (std::size_t c = 0; c < arity; ++c) {
      if (skip[c]) continue;
      if (cells[c] == schema.missing) {
        x.push_back(0.0);
        miss.push_back(1);
        continue;
      }
      try {
        x.push_back(detail::parse_double(cells[c]));
      } catch (const std::invalid_argument&) {
        throw std::runtime_error(source + ": row " + std::to_string(row) + " column " + std::to_string(c + 1) +
                                 ": unparseable value '" + cells[c] + "'");
      }
      miss.push_back(0);
    }
    table.inputs.push_back(std::move(x));
    table.missing.push_back(std::move(miss));
    table.labels.push_back(cells[class_col]);
  }
  if (table.rows() == 0) throw std::runtime_error(source + ": no data rows");
  if (schema.rows != 0 && table.rows() != schema.rows)
    throw std::runtime_error(source + ": " + std::to_string(table.rows()) + " rows, schema expects " +
                             std::to_string(schema.rows));
  return table;
}

inline Table load_csv(const std::string& path, const DatasetSchema& schema) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_csv(in, schema, path);
}

struct ImputeStrategy {
  enum class Kind { column_mean, constant };
  Kind kind = Kind::column_mean;
  double value = 0.0;

  static ImputeStrategy column_mean() { return {Kind::column_mean, 0.0}; }
  static ImputeStrategy constant(double v) { return {Kind::constant, v}; }
};

inline Table impute_missing(Table table, ImputeStrategy strategy) {
  for (std::size_t c = 0; c < table.width(); ++c) {
    double fill = strategy.value;
    if (strategy.kind == ImputeStrategy::Kind::column_mean) {
      double sum = 0.0;
      std::size_t n = 0;
      for (std::size_t r = 0; r < table.rows(); ++r)
        if (!table.missing[r][c]) {
          sum += table.inputs[r][c];
          ++n;
        }
      if (n == 0) {
        bool any_missing = false;
        for (std::size_t r = 0; r < table.rows(); ++r) any_missing |= table.missing[r][c] != 0;
        if (any_missing) throw std::runtime_error("column " + std::to_string(c + 1) + " has no observed values");
        continue;
      }
      fill = sum / static_cast<double>(n);
    }
    for (std::size_t r = 0; r < table.rows(); ++r)
      if (table.missing[r][c]) {
        table.inputs[r][c] = fill;
        table.missing[r][c] = 0;
      }
  }
  return table;
}

/// Replaces each listed categorical attribute with one indicator column per
/// distinct observed value (ascending value order). Other attributes keep
/// their relative order; expanded indicators take the attribute's place.
inline Table expand_categorical(const Table& table, const std::vector<std::size_t>& columns) {
  if (columns.empty()) return table;
  if (table.has_missing()) throw std::runtime_error("impute missing values before categorical expansion");
  std::map<std::size_t, std::vector<double>> levels;
  for (auto c : columns) {
    if (c >= table.width()) throw std::invalid_argument("categorical column outside the table");
    std::set<double> seen;
    for (const auto& row : table.inputs) seen.insert(row[c]);
    levels[c] = {seen.begin(), seen.end()};
  }
  Table out;
  out.labels = table.labels;
  for (const auto& row : table.inputs) {
    std::vector<double> x;
    for (std::size_t c = 0; c < row.size(); ++c) {
      auto it = levels.find(c);
      if (it == levels.end()) {
        x.push_back(row[c]);
        continue;
      }
      for (double level : it->second) x.push_back(row[c] == level ? 1.0 : 0.0);
    }
    out.missing.emplace_back(x.size(), 0);
    out.inputs.push_back(std::move(x));
  }
  return out;
}

/// Linear map of every input column onto [0,1] using the min and max over
/// all rows. Constant columns map to 0.
inline Table rescale_inputs(Table table) {
  for (std::size_t c = 0; c < table.width(); ++c) {
    double lo = table.inputs.front()[c], hi = lo;
    for (const auto& row : table.inputs) {
      lo = std::min(lo, row[c]);
      hi = std::max(hi, row[c]);
    }
    const double span = hi - lo;
    for (auto& row : table.inputs) row[c] = span > 0.0 ? (row[c] - lo) / span : 0.0;
  }
  return table;
}

/// 0-based class of a raw label token.
inline std::size_t class_index(const std::string& token, std::size_t classes,
                               const std::vector<std::string>& label_names) {
  if (!label_names.empty()) {
    auto it = std::find(label_names.begin(), label_names.end(), token);
    if (it == label_names.end()) throw std::runtime_error("unknown class label '" + token + "'");
    return static_cast<std::size_t>(it - label_names.begin());
  }
  std::size_t k = 0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), k);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size() || k < 1 || k > classes)
    throw std::runtime_error("unknown class label '" + token + "'");
  return k - 1;
}

/// 1-of-m target vectors.
inline std::vector<std::vector<double>> encode_targets(const Table& table, std::size_t classes,
                                                       const std::vector<std::string>& label_names = {}) {
  std::vector<std::vector<double>> out;
  out.reserve(table.rows());
  for (const auto& token : table.labels) {
    std::vector<double> t(classes, 0.0);
    t[class_index(token, classes, label_names)] = 1.0;
    out.push_back(std::move(t));
  }
  return out;
}

/// Consecutive slices train -> validation -> test in row order.
inline DataSplit partition(const PatternSet& all, const SplitSpec& spec) {
  if (spec.train < 1 || spec.validation < 1 || spec.test < 1)
    throw std::invalid_argument("every partition needs at least one example");
  if (spec.total() > all.size())
    throw std::runtime_error("split needs " + std::to_string(spec.total()) + " examples, only " +
                             std::to_string(all.size()) + " available");
  auto slice = [&](std::size_t from, std::size_t count) {
    PatternSet p;
    p.o_max = all.o_max;
    p.o_min = all.o_min;
    const auto b = static_cast<std::ptrdiff_t>(from), e = static_cast<std::ptrdiff_t>(from + count);
    p.inputs.assign(all.inputs.begin() + b, all.inputs.begin() + e);
    p.targets.assign(all.targets.begin() + b, all.targets.begin() + e);
    return p;
  };
  return {slice(0, spec.train), slice(spec.train, spec.validation),
          slice(spec.train + spec.validation, spec.test)};
}

/// Full preparation of a table into patterns with o_max = 1, o_min = 0.
inline PatternSet prepare(const Table& raw, const DatasetSchema& schema) {
  Table table = impute_missing(raw, ImputeStrategy::column_mean());
  table = expand_categorical(table, schema.onehot_cols);
  if (schema.rescale) table = rescale_inputs(std::move(table));
  PatternSet all;
  all.targets = encode_targets(table, schema.classes, schema.labels);
  all.inputs = std::move(table.inputs);
  all.o_max = 1.0;
  all.o_min = 0.0;
  return all;
}

inline DataSplit load_dataset(const std::string& data_path, const DatasetSchema& schema, const SplitSpec& split) {
  return partition(prepare(load_csv(data_path, schema), schema), split);
}

}  // namespace evonet
