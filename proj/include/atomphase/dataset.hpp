#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "atomphase/common.hpp"

namespace atomphase {

/// Row flag bits in the `flags` dataset column.
enum RowFlag : int {
  kFlagPhaseUndefined = 1,  ///< overlap underflowed; phi columns are NaN
  kFlagShortDistance = 2,   ///< k*z > 0.3, outside the near-field regime
  kFlagPointFailed = 4,     ///< numerical failure; value columns are NaN
};

/// Row-major numeric table with a deterministic metadata header.
struct Dataset {
  std::vector<std::string> columns;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<double> values;  ///< n_rows() * columns.size() entries

  std::size_t n_rows() const {
    return columns.empty() ? 0 : values.size() / columns.size();
  }
  double at(std::size_t row, std::size_t col) const {
    return values[row * columns.size() + col];
  }
};

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// CSV with '#'-prefixed metadata lines, a header row, '.' decimals and 17
/// significant digits, which round-trips doubles exactly. Identical datasets
/// produce identical bytes.
inline void emit_csv(const Dataset& dataset, std::ostream& out) {
  for (const auto& [key, value] : dataset.metadata)
    out << "# " << key << " = " << value << "\n";
  for (std::size_t c = 0; c < dataset.columns.size(); ++c)
    out << (c ? "," : "") << dataset.columns[c];
  out << "\n";
  const std::size_t ncol = dataset.columns.size();
  for (std::size_t r = 0; r < dataset.n_rows(); ++r) {
    for (std::size_t c = 0; c < ncol; ++c)
      out << (c ? "," : "") << detail::format_double(dataset.at(r, c));
    out << "\n";
  }
}

/// JSON lines: one metadata object, then one object per row. NaN values
/// (flagged rows) are emitted as null per the JSON grammar.
inline void emit_jsonl(const Dataset& dataset, std::ostream& out) {
  nlohmann::json meta;
  meta["type"] = "metadata";
  for (const auto& [key, value] : dataset.metadata) meta[key] = value;
  out << meta.dump() << "\n";
  const std::size_t ncol = dataset.columns.size();
  for (std::size_t r = 0; r < dataset.n_rows(); ++r) {
    nlohmann::json row;
    row["type"] = "row";
    for (std::size_t c = 0; c < ncol; ++c)
      row[dataset.columns[c]] = dataset.at(r, c);
    out << row.dump() << "\n";
  }
}

inline void emit(const Dataset& dataset, const std::string& format,
                 std::ostream& out) {
  if (format == "csv") emit_csv(dataset, out);
  else if (format == "jsonl") emit_jsonl(dataset, out);
  else throw ConfigError("output.format must be csv or jsonl");
}

/// Write to a file path, or to the given fallback stream when path is "-".
inline void emit_to_destination(const Dataset& dataset,
                                const std::string& format,
                                const std::string& path, std::ostream& stdout_stream) {
  if (path == "-" || path.empty()) {
    emit(dataset, format, stdout_stream);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  emit(dataset, format, file);
  file.flush();
  if (!file) throw IoError("write failed for '" + path + "'");
}

}  // namespace atomphase
