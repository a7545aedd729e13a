#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "annot/errors.hpp"
#include "annot/feature.hpp"

namespace annot {

struct FeatureTable {
  DescriptorKind kind = DescriptorKind::Ehd;

  struct Row {
    std::string path;
    int label = 0;
    std::vector<double> values;
  };
  std::vector<Row> rows;
};

namespace detail {

inline void append_double(std::string& out, double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, res.ptr);  // shortest form that round-trips exactly
}

inline double parse_double(std::string_view cell) {
  double value = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
    throw FormatError("non-numeric cell: '" + std::string(cell) + "'");
  }
  return value;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace detail

/// CSV layout: `#kind=<KIND>,dim=<d>` then `path,label,f0,...,f{d-1}` then
/// one row per image. LF endings, floats in shortest round-trip form.
inline void write_table(const FeatureTable& table, const std::filesystem::path& path) {
  const std::size_t dim = dimension_of(table.kind);
  std::string out = "#kind=" + kind_name(table.kind) + ",dim=" + std::to_string(dim) + "\n";
  out += "path,label";
  for (std::size_t j = 0; j < dim; ++j) out += ",f" + std::to_string(j);
  out += "\n";
  for (const auto& row : table.rows) {
    if (row.values.size() != dim) {
      throw FormatError("row '" + row.path + "' has " + std::to_string(row.values.size()) +
                        " values, kind needs " + std::to_string(dim));
    }
    out += row.path;
    out += ',';
    out += std::to_string(row.label);
    for (double v : row.values) {
      out += ',';
      detail::append_double(out, v);
    }
    out += '\n';
  }

  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot write " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("failed writing " + path.string());
}

inline FeatureTable read_table(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path.string());

  auto next_line = [&](std::string& line) {
    if (!std::getline(file, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  std::string line;
  if (!next_line(line) || !line.starts_with("#kind=")) {
    throw FormatError(path.string() + ": missing '#kind=' header");
  }
  const std::size_t comma = line.find(",dim=");
  if (comma == std::string::npos) {
    throw FormatError(path.string() + ": header lacks ',dim='");
  }
  FeatureTable table;
  table.kind = parse_kind(line.substr(6, comma - 6));
  const std::size_t dim = dimension_of(table.kind);
  std::size_t declared = 0;
  try {
    declared = std::stoul(line.substr(comma + 5));
  } catch (const std::exception&) {
    throw FormatError(path.string() + ": malformed dim field");
  }
  if (declared != dim) {
    throw FormatError(path.string() + ": header dim " + std::to_string(declared) +
                      " does not match " + kind_name(table.kind));
  }
  if (!next_line(line) || !line.starts_with("path,label")) {
    throw FormatError(path.string() + ": missing column header line");
  }

  while (next_line(line)) {
    if (line.empty()) continue;
    const auto fields = detail::split_csv(line);
    if (fields.size() != dim + 2) {
      throw FormatError(path.string() + ": row has " + std::to_string(fields.size()) +
                        " columns, expected " + std::to_string(dim + 2));
    }
    FeatureTable::Row row;
    row.path = std::string(fields[0]);
    const auto res = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(),
                                     row.label);
    if (res.ec != std::errc() || res.ptr != fields[1].data() + fields[1].size() ||
        row.label < 0) {
      throw FormatError(path.string() + ": bad label '" + std::string(fields[1]) + "'");
    }
    row.values.reserve(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      row.values.push_back(detail::parse_double(fields[j + 2]));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace annot
