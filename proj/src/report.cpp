#include "modica/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace modica {

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

std::string render_number(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
  return format_g17(v);
}

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

}  // namespace

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Record::Record(std::string check) : check_(std::move(check)) {}

void Record::set(const std::string& key, double v) { fields_.emplace_back(key, render_number(v)); }
void Record::set(const std::string& key, int64_t v) { fields_.emplace_back(key, std::to_string(v)); }
void Record::set(const std::string& key, uint64_t v) { fields_.emplace_back(key, std::to_string(v)); }
void Record::set(const std::string& key, bool v) { fields_.emplace_back(key, v ? "true" : "false"); }
void Record::set(const std::string& key, const std::string& v) {
  fields_.emplace_back(key, "\"" + json_escape(v) + "\"");
}
void Record::set(const std::string& key, const char* v) { set(key, std::string(v)); }

void Record::set_pass(bool p) { pass_ = p; }

std::string Record::to_json() const {
  std::string out = "{\"check\":\"" + json_escape(check_) + "\"";
  for (const auto& [k, v] : fields_) out += ",\"" + json_escape(k) + "\":" + v;
  out += std::string(",\"pass\":") + (pass_ ? "true" : "false") + "}";
  return out;
}

void write_jsonl(const std::string& path, const std::vector<Record>& records) {
  auto out = open_or_throw(path);
  for (const auto& r : records) out << r.to_json() << "\n";
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size())
    throw std::runtime_error("csv row width does not match header");
  rows_.push_back(std::move(cells));
}

void CsvTable::write(const std::string& path) const {
  auto out = open_or_throw(path);
  for (size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << header_[i];
  out << "\n";
  for (const auto& row : rows_) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

}  // namespace modica
