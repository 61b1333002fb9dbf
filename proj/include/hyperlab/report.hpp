#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hyperlab/error.hpp"

namespace hyperlab::report {

/// Insertion-ordered, so field order in every emitted report is stable.
using Record = nlohmann::ordered_json;

enum class Format { json, csv };

/// %.17g: enough digits to round-trip any double. Non-finite values have no
/// JSON spelling and become null.
inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

namespace detail {
inline void write_json(std::ostream& os, const Record& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Record::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad << Record(it.key()).dump() << (indent > 0 ? ": " : ":");
        write_json(os, it.value(), indent, depth + 1);
      }
      os << nl << close_pad << '}';
      return;
    }
    case Record::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(), [](const Record& e) { return e.is_structured(); });
      os << '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) os << ',';
        if (!flat)
          os << nl << pad;
        else if (!first && indent > 0)
          os << ' ';
        first = false;
        write_json(os, e, indent, depth + 1);
      }
      if (!flat) os << nl << close_pad;
      os << ']';
      return;
    }
    case Record::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

inline void flatten(const Record& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    return;
  }
  std::string cell;
  if (j.is_string())
    cell = j.get<std::string>();
  else if (j.is_number_float())
    cell = format_double(j.get<double>());
  else if (j.is_null())
    cell = "";
  else if (j.is_array()) {
    std::ostringstream os;
    write_json(os, j, 0, 0);
    cell = os.str();
  } else
    cell = j.dump();
  out.emplace_back(prefix, cell);
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}
}  // namespace detail

inline std::string to_json_text(const Record& r) {
  std::ostringstream os;
  detail::write_json(os, r, 2, 0);
  os << '\n';
  return os.str();
}

/// One row per element of r["records"] when present, otherwise one row for
/// the whole report. Nested objects become dotted columns; arrays are inlined
/// as compact JSON.
inline std::string to_csv_text(const Record& r) {
  std::vector<std::vector<std::pair<std::string, std::string>>> rows;
  if (r.contains("records") && r["records"].is_array()) {
    for (const auto& rec : r["records"]) {
      rows.emplace_back();
      detail::flatten(rec, "", rows.back());
    }
  } else {
    rows.emplace_back();
    detail::flatten(r, "", rows.back());
  }
  std::ostringstream os;
  if (rows.empty()) return {};
  for (std::size_t i = 0; i < rows[0].size(); ++i)
    os << (i ? "," : "") << detail::csv_escape(rows[0][i].first);
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << detail::csv_escape(row[i].second);
    os << '\n';
  }
  return os.str();
}

inline std::string render(const Record& r, Format f) {
  return f == Format::json ? to_json_text(r) : to_csv_text(r);
}

}  // namespace hyperlab::report
