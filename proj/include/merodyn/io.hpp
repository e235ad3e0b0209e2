// CSV formatting and parsing used by the CLI and its tests.
// Locale-independent: '.' decimal point, '\n' line endings, doubles printed
// with 17 significant digits so a re-parse reproduces them bit-exactly.
#pragma once

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

namespace merodyn::io {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& s) {
  return std::strtod(s.c_str(), nullptr);
}

struct CsvTable {
  std::vector<std::string> comments;              // leading '#' lines, without '#'
  std::vector<std::string> columns;               // first non-comment line
  std::vector<std::vector<std::string>> rows;
};

inline std::string write_csv(const CsvTable& t) {
  std::string out;
  for (const auto& c : t.comments) out += "# " + c + "\n";
  auto join = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += fields[i];
    }
    out += '\n';
  };
  if (!t.columns.empty()) join(t.columns);
  for (const auto& r : t.rows) join(r);
  return out;
}

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

inline CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool saw_columns = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::size_t start = line.size() > 1 && line[1] == ' ' ? 2 : 1;
      t.comments.push_back(line.substr(start));
      continue;
    }
    if (!saw_columns) {
      t.columns = split_fields(line);
      saw_columns = true;
    } else {
      t.rows.push_back(split_fields(line));
    }
  }
  return t;
}

}  // namespace merodyn::io
