#include "render.h"

#include <algorithm>
#include <charconv>
#include <utility>
#include <vector>

namespace copula_ot::cli {
namespace {

using Field = std::pair<std::string, std::string>;

std::string cell_text(const Json& v) {
  switch (v.type()) {
    case Json::value_t::null:
      return "";
    case Json::value_t::boolean:
      return v.get<bool>() ? "true" : "false";
    case Json::value_t::number_float:
      return format_number(v.get<double>());
    case Json::value_t::number_integer:
      return std::to_string(v.get<long long>());
    case Json::value_t::number_unsigned:
      return std::to_string(v.get<unsigned long long>());
    case Json::value_t::string:
      return v.get<std::string>();
    default:
      return v.dump();
  }
}

bool is_table(const Json& v) {
  return v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), [](const Json& row) { return row.is_object(); });
}

void collect(const Json& obj, const std::string& prefix, std::vector<Field>& scalars,
             std::vector<std::pair<std::string, const Json*>>& tables) {
  for (const auto& [key, value] : obj.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      collect(value, name, scalars, tables);
    } else if (is_table(value)) {
      tables.emplace_back(name, &value);
    } else if (value.is_array() && std::all_of(value.begin(), value.end(), [](const Json& x) { return x.is_string(); })) {
      std::string joined;
      for (const auto& s : value) joined += (joined.empty() ? "" : "; ") + s.get<std::string>();
      scalars.emplace_back(name, joined);
    } else {
      scalars.emplace_back(name, cell_text(value));
    }
  }
}

std::vector<std::string> columns_of(const Json& table) {
  std::vector<std::string> cols;
  for (const auto& row : table) {
    for (const auto& [key, _] : row.items()) {
      if (std::find(cols.begin(), cols.end(), key) == cols.end()) cols.push_back(key);
    }
  }
  return cols;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void render_csv(const Report& report, std::ostream& out) {
  std::vector<Field> scalars;
  std::vector<std::pair<std::string, const Json*>> tables;
  collect(report.data, "", scalars, tables);
  out << "field,value\n";
  out << "command," << csv_escape(report.command) << "\n";
  for (const auto& [k, v] : scalars) out << csv_escape(k) << "," << csv_escape(v) << "\n";
  for (const auto& [name, table] : tables) {
    out << "\n# " << name << "\n";
    const auto cols = columns_of(*table);
    for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << csv_escape(cols[c]);
    out << "\n";
    for (const auto& row : *table) {
      for (std::size_t c = 0; c < cols.size(); ++c) {
        out << (c ? "," : "") << (row.contains(cols[c]) ? csv_escape(cell_text(row[cols[c]])) : "");
      }
      out << "\n";
    }
  }
}

void render_plain(const Report& report, std::ostream& out) {
  std::vector<Field> scalars;
  std::vector<std::pair<std::string, const Json*>> tables;
  collect(report.data, "", scalars, tables);
  out << report.command << "\n";
  std::size_t key_width = 0;
  for (const auto& [k, _] : scalars) key_width = std::max(key_width, k.size());
  for (const auto& [k, v] : scalars) out << "  " << k << ":" << std::string(key_width - k.size() + 1, ' ') << v << "\n";
  for (const auto& [name, table] : tables) {
    out << name << "\n";
    const auto cols = columns_of(*table);
    std::vector<std::vector<std::string>> cells{cols};
    for (const auto& row : *table) {
      std::vector<std::string> line;
      for (const auto& c : cols) line.push_back(row.contains(c) ? cell_text(row[c]) : "");
      cells.push_back(std::move(line));
    }
    std::vector<std::size_t> widths(cols.size(), 0);
    for (const auto& line : cells) {
      for (std::size_t c = 0; c < line.size(); ++c) widths[c] = std::max(widths[c], line[c].size());
    }
    for (const auto& line : cells) {
      std::string text = " ";
      for (std::size_t c = 0; c < line.size(); ++c) {
        text += " " + line[c];
        if (c + 1 < line.size()) text += std::string(widths[c] - line[c].size() + 1, ' ');
      }
      out << text << "\n";
    }
  }
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

void render(const Report& report, Format format, std::ostream& out) {
  switch (format) {
    case Format::kJson: {
      Json doc = Json::object();
      doc["command"] = report.command;
      doc["data"] = report.data;
      doc["metadata"] = report.metadata;
      out << doc.dump(2) << "\n";
      break;
    }
    case Format::kCsv:
      render_csv(report, out);
      break;
    case Format::kPlain:
      render_plain(report, out);
      break;
  }
}

}  // namespace copula_ot::cli
