// Copyright 2026 The FAE Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fae/data.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "fae/error.h"

namespace fae {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(delim, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

std::optional<double> parse_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

FeatureKind infer_feature_kind(std::span<const double> column, int threshold) {
  std::set<double> distinct;
  for (double v : column) {
    if (v != std::floor(v)) return FeatureKind::kContinuous;
    distinct.insert(v);
    if (static_cast<int>(distinct.size()) > threshold) return FeatureKind::kContinuous;
  }
  return FeatureKind::kDiscrete;
}

Dataset parse_dataset(std::istream& in, const CsvSource& options, std::string_view origin) {
  const std::string where(origin);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (trim(line).empty()) continue;
    header = split(line, options.delimiter);
    break;
  }
  if (header.empty()) throw Error(ErrorKind::kEmptySource, where + ": empty file");
  for (auto& h : header) h = unquote(h);

  int weight_col = -1;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == kWeightColumn) {
      if (weight_col >= 0) throw Error(ErrorKind::kParse, where + ": duplicate __weight__ column");
      weight_col = static_cast<int>(c);
    } else {
      names.push_back(header[c]);
    }
  }
  if (names.empty()) throw Error(ErrorKind::kParse, where + ": no feature columns");

  std::vector<FeatureVector> rows;
  std::vector<double> weights;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line, options.delimiter);
    if (cells.size() != header.size()) {
      throw Error(ErrorKind::kParse, where + ":" + std::to_string(line_no) + ": expected " +
                                         std::to_string(header.size()) + " cells, found " +
                                         std::to_string(cells.size()));
    }
    FeatureVector row;
    row.reserve(names.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto v = parse_double(cells[c]);
      if (!v || !std::isfinite(*v)) {
        throw Error(ErrorKind::kParse, where + ":" + std::to_string(line_no) + ":" +
                                           std::to_string(c + 1) + ": non-numeric cell '" +
                                           cells[c] + "' in column '" + header[c] + "'");
      }
      if (static_cast<int>(c) == weight_col) {
        weights.push_back(*v);
      } else {
        row.push_back(*v);
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::kEmptySource, where + ": no data rows");

  std::vector<FeatureKind> kinds;
  for (std::size_t f = 0; f < names.size(); ++f) {
    if (auto it = options.kind_overrides.find(names[f]); it != options.kind_overrides.end()) {
      kinds.push_back(it->second);
      continue;
    }
    std::vector<double> col;
    col.reserve(rows.size());
    for (const auto& r : rows) col.push_back(r[f]);
    kinds.push_back(infer_feature_kind(col, options.discrete_threshold));
  }
  for (const auto& [name, kind] : options.kind_overrides) {
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      throw Error(ErrorKind::kConfig, "kind override for unknown column '" + name + "'");
    }
  }
  FeatureSchema schema(std::move(names), std::move(kinds));

  if (weight_col < 0) return Dataset(std::move(schema), std::move(rows));
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw Error(ErrorKind::kRange, where + ": negative __weight__");
    total += w;
  }
  if (total <= 0.0) throw Error(ErrorKind::kRange, where + ": __weight__ column sums to zero");
  if (std::abs(total - 1.0) > 1e-12) {
    if (std::abs(total - 1.0) > 1e-6) {
      std::clog << "warning: " << where << ": __weight__ sums to " << format_double(total)
                << "; renormalizing\n";
    }
    for (double& w : weights) w /= total;
  }
  return Dataset(std::move(schema), std::move(rows), std::move(weights));
}

Dataset load_dataset(const CsvSource& source) {
  std::ifstream in(source.path);
  if (!in) {
    throw Error(ErrorKind::kConfig, "cannot open data file '" + source.path.string() + "'");
  }
  return parse_dataset(in, source, source.path.string());
}

void write_dataset(const Dataset& data, std::ostream& out, char delimiter) {
  const auto& names = data.schema().names();
  for (std::size_t f = 0; f < names.size(); ++f) {
    if (f) out << delimiter;
    out << names[f];
  }
  if (data.has_explicit_weights()) out << delimiter << kWeightColumn;
  out << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& row = data.row(i);
    for (std::size_t f = 0; f < row.size(); ++f) {
      if (f) out << delimiter;
      out << format_double(row[f]);
    }
    if (data.has_explicit_weights()) out << delimiter << format_double(data.weight(i));
    out << '\n';
  }
}

FeatureVector parse_vector(std::string_view text, char delimiter) {
  FeatureVector out;
  for (const auto& cell : split(text, delimiter)) {
    const auto v = parse_double(cell);
    if (!v || !std::isfinite(*v)) {
      throw Error(ErrorKind::kConfig, "cannot parse '" + cell + "' as a number in '" +
                                          std::string(text) + "'");
    }
    out.push_back(*v);
  }
  return out;
}

}  // namespace fae
