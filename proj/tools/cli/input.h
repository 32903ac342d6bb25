#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "copula_ot/distribution.h"

namespace copula_ot::cli {

/// Rows of a numeric CSV table. A header row is dropped when its first token
/// is not a number. Every row has the same number of columns.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t width() const { return rows.empty() ? 0 : rows.front().size(); }
  std::vector<double> column(std::size_t k) const;
};

/// Throws InputError on malformed text.
Table parse_csv(std::string_view text, const std::string& source);
Table read_csv(const std::filesystem::path& path);

/// Locale-independent strict parse of a whole token.
bool parse_number(std::string_view token, double& out);

/// A distribution named on the command line: an existing CSV file of samples
/// (one column), or an inline spec
///   normal:MEAN,SD   uniform:A,B   exponential:RATE
///   point:X          discrete:X@W,X@W,...   samples:X,X,...
Distribution1D load_distribution(const std::string& arg);

/// Per-column empirical margins of a multi-column sample file.
std::vector<Distribution1D> load_margins(const std::string& arg);

}  // namespace copula_ot::cli
