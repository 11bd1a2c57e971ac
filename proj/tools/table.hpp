#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace inctool {

// One formatted output table. Cells are pre-formatted text; numeric cells are
// emitted as raw JSON numbers when finite. All content is deterministic:
// metadata carries the config echo and rule descriptions, never timestamps,
// so reruns are byte-identical.
struct Cell {
  std::string text;
  bool numeric = false;
};

inline Cell num(double v) {
  if (std::isnan(v)) return {"nan", false};
  if (std::isinf(v)) return {v > 0 ? "inf" : "-inf", false};
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return {buf, true};
}

inline Cell num(long long v) { return {std::to_string(v), true}; }
inline Cell txt(std::string s) { return {std::move(s), false}; }

struct Table {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_meta(std::string key, std::string value) {
    meta.emplace_back(std::move(key), std::move(value));
  }
};

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string render_csv(const Table& t) {
  std::string out;
  for (const auto& [k, v] : t.meta) out += "# " + k + "=" + v + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    out += (i ? "," : "") + csv_escape(t.columns[i]);
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out += (i ? "," : "") + csv_escape(row[i].text);
    out += "\n";
  }
  return out;
}

inline std::string render_json(const Table& t) {
  std::string out = "{\n  \"meta\": {";
  for (std::size_t i = 0; i < t.meta.size(); ++i)
    out += (i ? ",\n    " : "\n    ") + ("\"" + json_escape(t.meta[i].first) + "\": \"" +
                                         json_escape(t.meta[i].second) + "\"");
  out += "\n  },\n  \"columns\": [";
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    out += (i ? ", " : "") + ("\"" + json_escape(t.columns[i]) + "\"");
  out += "],\n  \"rows\": [";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out += (r ? ",\n    " : "\n    ") + std::string("[");
    for (std::size_t i = 0; i < t.rows[r].size(); ++i) {
      const Cell& c = t.rows[r][i];
      out += (i ? ", " : "");
      out += c.numeric ? c.text : "\"" + json_escape(c.text) + "\"";
    }
    out += "]";
  }
  out += "\n  ]\n}\n";
  return out;
}

// Write via a temporary file in the same directory plus rename, so readers
// never observe a partially written table.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace inctool
