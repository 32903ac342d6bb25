#include "input.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "copula_ot/errors.h"
#include "errors.h"

namespace copula_ot::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::vector<double> numbers(std::string_view list, const std::string& what) {
  std::vector<double> out;
  for (auto token : split(list, ',')) {
    double x = 0.0;
    if (!parse_number(token, x)) throw InputError(what + ": '" + std::string(token) + "' is not a number");
    out.push_back(x);
  }
  return out;
}

Distribution1D inline_spec(const std::string& arg) {
  const auto colon = arg.find(':');
  const std::string kind = arg.substr(0, colon);
  const std::string_view body = std::string_view(arg).substr(colon + 1);
  auto params = [&](std::size_t n) {
    auto v = numbers(body, kind);
    if (v.size() != n) {
      throw InputError(kind + ": expected " + std::to_string(n) + " parameter(s), got " + std::to_string(v.size()));
    }
    return v;
  };
  try {
    if (kind == "normal") {
      const auto v = params(2);
      return distributions::normal(v[0], v[1]);
    }
    if (kind == "uniform") {
      const auto v = params(2);
      return distributions::uniform(v[0], v[1]);
    }
    if (kind == "exponential") return distributions::exponential(params(1)[0]);
    if (kind == "point") return Distribution1D::point_mass(params(1)[0]);
    if (kind == "samples") return from_samples(numbers(body, kind));
    if (kind == "discrete") {
      std::vector<double> atoms;
      std::vector<double> weights;
      for (auto pair : split(body, ',')) {
        const auto at = pair.find('@');
        double x = 0.0;
        double w = 0.0;
        if (at == std::string_view::npos || !parse_number(trim(pair.substr(0, at)), x) ||
            !parse_number(trim(pair.substr(at + 1)), w)) {
          throw InputError("discrete: expected X@W, got '" + std::string(pair) + "'");
        }
        atoms.push_back(x);
        weights.push_back(w);
      }
      return Distribution1D::discrete(atoms, weights);
    }
  } catch (const copula_ot::Error& e) {
    throw InputError(arg + ": " + e.what());
  }
  throw InputError("'" + arg + "' is neither a readable file nor a known spec "
                   "(normal, uniform, exponential, point, discrete, samples)");
}

}  // namespace

bool parse_number(std::string_view token, double& out) {
  if (token.empty()) return false;
  if (token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size() && std::isfinite(out);
}

std::vector<double> Table::column(std::size_t k) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[k]);
  return out;
}

Table parse_csv(std::string_view text, const std::string& source) {
  Table table;
  std::size_t line_no = 0;
  bool first = true;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    double probe = 0.0;
    if (first && !parse_number(cells.front(), probe)) {
      for (auto c : cells) table.header.emplace_back(c);
      first = false;
      continue;
    }
    first = false;
    std::vector<double> row;
    for (auto cell : cells) {
      double x = 0.0;
      if (!parse_number(cell, x)) {
        throw InputError(source + ":" + std::to_string(line_no) + ": '" + std::string(cell) +
                         "' is not a finite number");
      }
      row.push_back(x);
    }
    if (!table.rows.empty() && row.size() != table.width()) {
      throw InputError(source + ":" + std::to_string(line_no) + ": expected " + std::to_string(table.width()) +
                       " columns, got " + std::to_string(row.size()));
    }
    if (!table.header.empty() && row.size() != table.header.size()) {
      throw InputError(source + ":" + std::to_string(line_no) + ": row width differs from header");
    }
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) throw InputError(source + ": no data rows");
  return table;
}

Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), path.string());
}

Distribution1D load_distribution(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    const Table t = read_csv(arg);
    if (t.width() != 1) throw InputError(arg + ": expected one column of samples, got " + std::to_string(t.width()));
    return from_samples(t.column(0));
  }
  if (arg.find(':') == std::string::npos) throw InputError(arg + ": no such file");
  return inline_spec(arg);
}

std::vector<Distribution1D> load_margins(const std::string& arg) {
  const Table t = read_csv(arg);
  std::vector<Distribution1D> margins;
  for (std::size_t k = 0; k < t.width(); ++k) margins.push_back(from_samples(t.column(k)));
  return margins;
}

}  // namespace copula_ot::cli
