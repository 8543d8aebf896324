#pragma once

// Row-oriented result tables for the command-line tool. Every value is a
// string; numbers are formatted with %.17g so output round-trips.

#include <string>
#include <utility>
#include <vector>

namespace gmc::cli {

using Row = std::vector<std::pair<std::string, std::string>>;

struct Table {
  std::string command;
  Row parameters;  // echoed once at the top of JSON output
  std::vector<Row> rows;
};

std::string num(double v);
std::string num(long v);
std::string num(int v);
std::string num(unsigned long long v);

/// {"command": ..., "parameters": {...}, "rows": [{...}, ...]}
std::string to_json(const Table& table);
/// Header from the first row's keys; the parameter echo is already part of
/// every row.
std::string to_csv(const Table& table);

}  // namespace gmc::cli
