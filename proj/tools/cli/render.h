#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

namespace copula_ot::cli {

using Json = nlohmann::ordered_json;

enum class Format { kJson, kCsv, kPlain };

/// A command result. `data` is deterministic for fixed inputs; `metadata`
/// carries run context and is excluded from determinism guarantees.
struct Report {
  std::string command;
  Json data = Json::object();
  Json metadata = Json::object();
};

/// Shortest decimal that parses back to the same double.
std::string format_number(double x);

/// JSON: {"command", "data", "metadata"}. CSV and plain text render the
/// scalar fields of `data` (nested objects flattened with dots) followed by
/// one section per array-of-objects field.
void render(const Report& report, Format format, std::ostream& out);

}  // namespace copula_ot::cli
