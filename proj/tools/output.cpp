#include "output.h"

#include <cstdio>

#include <json.hpp>

namespace gmc::cli {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

std::string num(long v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }
std::string num(unsigned long long v) { return std::to_string(v); }

std::string to_json(const Table& table) {
  nlohmann::ordered_json out;
  out["command"] = table.command;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [key, value] : table.parameters) {
    params[key] = value;
  }
  out["parameters"] = std::move(params);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const Row& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (const auto& [key, value] : row) {
      obj[key] = value;
    }
    rows.push_back(std::move(obj));
  }
  out["rows"] = std::move(rows);
  return out.dump(2) + "\n";
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') {
      quoted += '"';
    }
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string out;
  if (table.rows.empty()) {
    return out;
  }
  const Row& first = table.rows.front();
  for (std::size_t i = 0; i < first.size(); ++i) {
    out += (i ? "," : "") + csv_field(first[i].first);
  }
  out += "\n";
  for (const Row& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += (i ? "," : "") + csv_field(row[i].second);
    }
    out += "\n";
  }
  return out;
}

}  // namespace gmc::cli
