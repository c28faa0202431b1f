// Copyright 2026 The qgssl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "qgssl/error.hpp"
#include "qgssl/graph.hpp"
#include "qgssl/random.hpp"

namespace qgssl {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

// RFC 4180 subset: quoted fields with "" escapes, no embedded newlines.
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(trim(field));
  return fields;
}

bool parse_double(const std::string& text, double& out) {
  if (text.empty()) return false;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

std::size_t Dataset::labeled_count() const {
  return static_cast<std::size_t>(std::count(labeled_mask.begin(), labeled_mask.end(), true));
}

std::vector<int> Dataset::labeled_indices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < labeled_mask.size(); ++i) {
    if (labeled_mask[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> Dataset::unlabeled_indices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < labeled_mask.size(); ++i) {
    if (!labeled_mask[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

void Dataset::validate() const {
  const std::size_t n = labels.size();
  if (static_cast<std::size_t>(features.rows()) != n || labeled_mask.size() != n) {
    throw std::invalid_argument("dataset '" + name + "': inconsistent row counts");
  }
  if (class_count < 1) throw std::invalid_argument("dataset '" + name + "': no classes");
  std::vector<int> per_class(static_cast<std::size_t>(class_count), 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] < 0 || labels[i] >= class_count) {
      throw std::invalid_argument("dataset '" + name + "': class id out of range at row " +
                                  std::to_string(i));
    }
    if (labeled_mask[i]) ++per_class[static_cast<std::size_t>(labels[i])];
  }
  for (int c = 0; c < class_count; ++c) {
    if (per_class[static_cast<std::size_t>(c)] == 0) {
      throw std::invalid_argument("dataset '" + name + "': class " + std::to_string(c) +
                                  " has no labeled node");
    }
  }
  if (!features.allFinite()) {
    throw std::invalid_argument("dataset '" + name + "': non-finite feature value");
  }
}

DatasetSchema DatasetSchema::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open schema file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("schema " + path.string() + ": " + e.what());
  }
  DatasetSchema s;
  s.name = j.value("name", path.stem().stem().string());
  if (!j.contains("label_column")) throw DataError("schema " + path.string() + ": no label_column");
  s.label_column = j.at("label_column").get<std::string>();
  s.categorical_columns = j.value("categorical_columns", std::vector<std::string>{});
  s.drop_columns = j.value("drop_columns", std::vector<std::string>{});
  s.class_order = j.value("class_order", std::vector<std::string>{});
  return s;
}

Dataset load_dataset(const std::filesystem::path& csv_path, const DatasetSchema& schema) {
  std::ifstream in(csv_path);
  if (!in) throw DataError("cannot open dataset file " + csv_path.string());

  std::string line;
  if (!std::getline(in, line)) throw DataError(csv_path.string() + ": empty file");
  const std::vector<std::string> header = split_csv_line(line);

  auto column_of = [&](const std::string& name) -> int {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw DataError(csv_path.string() + ": column '" + name + "' not in header");
    }
    return static_cast<int>(it - header.begin());
  };
  const int label_col = column_of(schema.label_column);
  std::set<int> categorical;
  for (const auto& c : schema.categorical_columns) categorical.insert(column_of(c));
  std::set<int> dropped;
  for (const auto& c : schema.drop_columns) dropped.insert(column_of(c));

  std::vector<std::vector<std::string>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw DataError(csv_path.string() + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    rows.push_back(std::move(fields));
  }
  if (rows.empty()) throw DataError(csv_path.string() + ": no data rows");

  Dataset ds;
  ds.name = schema.name.empty() ? csv_path.stem().string() : schema.name;

  // Classes.
  if (schema.class_order.empty()) {
    std::set<std::string> names;
    for (const auto& r : rows) names.insert(r[static_cast<std::size_t>(label_col)]);
    ds.class_names.assign(names.begin(), names.end());
  } else {
    ds.class_names = schema.class_order;
  }
  std::map<std::string, int> class_id;
  for (std::size_t c = 0; c < ds.class_names.size(); ++c) {
    class_id[ds.class_names[c]] = static_cast<int>(c);
  }
  ds.class_count = static_cast<int>(ds.class_names.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& value = rows[r][static_cast<std::size_t>(label_col)];
    const auto it = class_id.find(value);
    if (it == class_id.end()) {
      throw DataError(csv_path.string() + ":" + std::to_string(r + 2) + ": unknown label value '" +
                      value + "'");
    }
    ds.labels.push_back(it->second);
  }

  // Feature layout: numeric columns take one slot, categoricals one per category.
  struct Slot {
    int column;
    std::string category;  // empty for numeric
  };
  std::vector<Slot> slots;
  for (int c = 0; c < static_cast<int>(header.size()); ++c) {
    if (c == label_col || dropped.count(c)) continue;
    if (categorical.count(c)) {
      std::set<std::string> cats;
      for (const auto& r : rows) cats.insert(r[static_cast<std::size_t>(c)]);
      for (const auto& cat : cats) {
        slots.push_back({c, cat});
        ds.feature_names.push_back(header[static_cast<std::size_t>(c)] + "=" + cat);
      }
    } else {
      slots.push_back({c, {}});
      ds.feature_names.push_back(header[static_cast<std::size_t>(c)]);
    }
  }

  ds.features.resize(static_cast<Eigen::Index>(rows.size()),
                     static_cast<Eigen::Index>(slots.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t s = 0; s < slots.size(); ++s) {
      const auto& cell = rows[r][static_cast<std::size_t>(slots[s].column)];
      double v = 0.0;
      if (categorical.count(slots[s].column)) {
        v = cell == slots[s].category ? 1.0 : 0.0;
      } else if (!parse_double(cell, v)) {
        throw DataError(csv_path.string() + ":" + std::to_string(r + 2) + ": non-numeric cell '" +
                        cell + "' in column '" + header[static_cast<std::size_t>(slots[s].column)] +
                        "'");
      }
      ds.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) = v;
    }
  }
  ds.labeled_mask.assign(rows.size(), true);
  return ds;
}

Dataset load_dataset(const std::filesystem::path& csv_path) {
  auto schema_path = csv_path;
  schema_path.replace_extension(".schema.json");
  if (!std::filesystem::exists(csv_path)) {
    throw DataError("dataset file not found: " + csv_path.string());
  }
  return load_dataset(csv_path, DatasetSchema::from_json_file(schema_path));
}

StandardizedFeatures standardize_features(const Eigen::MatrixXd& raw) {
  const Eigen::Index n = raw.rows();
  if (n < 2) throw std::invalid_argument("standardize_features: need at least two rows");
  StandardizedFeatures out;
  std::vector<Eigen::VectorXd> columns;
  for (Eigen::Index c = 0; c < raw.cols(); ++c) {
    const Eigen::VectorXd col = raw.col(c);
    const double mean = col.mean();
    const double var = (col.array() - mean).square().sum() / static_cast<double>(n - 1);
    const double sd = std::sqrt(var);
    const double scale = std::max(1.0, col.cwiseAbs().maxCoeff());
    if (!(sd > 1e-12 * scale)) {
      out.dropped_columns.push_back(static_cast<int>(c));
      continue;
    }
    out.kept_columns.push_back(static_cast<int>(c));
    columns.push_back((col.array() - mean) / sd);
  }
  if (columns.empty()) {
    throw std::invalid_argument("standardize_features: every feature column is constant");
  }
  out.values.resize(n, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out.values.col(static_cast<Eigen::Index>(c)) = columns[c];
  }
  return out;
}

std::vector<std::string> standardize(Dataset& dataset) {
  auto z = standardize_features(dataset.features);
  std::vector<std::string> dropped;
  std::vector<std::string> kept;
  for (int c : z.dropped_columns) {
    if (static_cast<std::size_t>(c) < dataset.feature_names.size()) {
      dropped.push_back(dataset.feature_names[static_cast<std::size_t>(c)]);
    }
  }
  if (dataset.feature_names.size() == static_cast<std::size_t>(dataset.features.cols())) {
    for (int c : z.kept_columns) kept.push_back(dataset.feature_names[static_cast<std::size_t>(c)]);
    dataset.feature_names = std::move(kept);
  }
  dataset.features = std::move(z.values);
  return dropped;
}

Dataset mask_labels(const Dataset& dataset, double label_rate, std::uint64_t seed) {
  if (!(label_rate > 0.0 && label_rate <= 1.0)) {
    throw std::invalid_argument("mask_labels: label_rate must be in (0, 1]");
  }
  Dataset out = dataset;
  out.labeled_mask.assign(dataset.size(), false);
  Rng rng = make_rng(seed);
  for (int c = 0; c < dataset.class_count; ++c) {
    std::vector<int> members;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      if (dataset.labels[i] == c) members.push_back(static_cast<int>(i));
    }
    const auto count = static_cast<std::size_t>(
        std::lround(label_rate * static_cast<double>(members.size())));
    if (count == 0) {
      throw std::invalid_argument("mask_labels: label_rate " + std::to_string(label_rate) +
                                  " leaves class " + std::to_string(c) + " without labels");
    }
    // Partial Fisher-Yates: the first `count` slots are the sample.
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = i + uniform_index(rng, members.size() - i);
      std::swap(members[i], members[j]);
      out.labeled_mask[static_cast<std::size_t>(members[i])] = true;
    }
  }
  return out;
}

}  // namespace qgssl
