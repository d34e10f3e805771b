#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "rlab/cli.hpp"
#include "rlab/errors.hpp"

namespace rlab::cli {

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

std::size_t Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == name) return i;
  }
  throw UsageError("table has no column '" + name + "'");
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw UsageError("table row has " + std::to_string(row.size()) + " cells, expected " +
                     std::to_string(columns_.size()));
  }
  rows_.push_back(std::move(row));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct CellFormatter {
  std::string operator()(std::monostate) const { return ""; }
  std::string operator()(long long v) const { return std::to_string(v); }
  std::string operator()(double v) const { return format_double(v); }
  std::string operator()(const std::string& s) const { return s; }
};

nlohmann::ordered_json cell_json(const Cell& c) {
  if (std::holds_alternative<std::monostate>(c)) return nullptr;
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return nullptr;
    return *d;
  }
  return std::get<std::string>(c);
}

}  // namespace

std::string format_cell(const Cell& c) { return std::visit(CellFormatter{}, c); }

void Table::write_csv(std::ostream& out, const std::string& generated) const {
  out << "# generated " << generated << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    out << (i ? "," : "") << columns_[i];
  }
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << csv_escape(format_cell(row[i]));
    }
    out << '\n';
  }
}

void Table::write_json(std::ostream& out, const std::string& command,
                       const std::string& generated) const {
  // The timestamp sits alone on the first line, like the CSV header.
  out << "{\"generated\": \"" << generated << "\",\n";
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : rows_) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[columns_[i]] = cell_json(row[i]);
    rows.push_back(std::move(obj));
  }
  out << "\"command\": " << nlohmann::ordered_json(command).dump() << ",\n";
  out << "\"columns\": " << nlohmann::ordered_json(columns_).dump() << ",\n";
  out << "\"rows\": " << rows.dump(1) << "}\n";
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void emit(const CommandResult& result, const SweepConfig& cfg, std::ostream& fallback,
          const std::string& generated) {
  auto write = [&](std::ostream& os) {
    if (cfg.format == Format::Json) {
      result.table.write_json(os, result.command, generated);
    } else {
      result.table.write_csv(os, generated);
    }
  };
  if (!cfg.out) {
    write(fallback);
    return;
  }
  std::ofstream file(*cfg.out, std::ios::binary);
  if (!file) throw ConfigError("cannot write '" + cfg.out->string() + "'");
  write(file);
  if (!file) throw ConfigError("write to '" + cfg.out->string() + "' failed");
}

}  // namespace rlab::cli
