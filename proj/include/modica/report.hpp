#ifndef MODICA_REPORT_HPP
#define MODICA_REPORT_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace modica {

/// 17-significant-digit formatting used for every number we persist, so
/// reruns diff cleanly.
std::string format_g17(double v);

/// One summary line: ordered key/value pairs rendered as a JSON object.
/// Values are typed so numbers are not quoted.
class Record {
 public:
  explicit Record(std::string check);

  void set(const std::string& key, double v);
  void set(const std::string& key, int64_t v);
  void set(const std::string& key, uint64_t v);
  void set(const std::string& key, bool v);
  void set(const std::string& key, const std::string& v);
  void set(const std::string& key, const char* v);

  const std::string& check() const { return check_; }
  bool pass() const { return pass_; }
  void set_pass(bool p);

  std::string to_json() const;

 private:
  std::string check_;
  bool pass_ = true;
  std::vector<std::pair<std::string, std::string>> fields_;  // key -> rendered value
};

void write_jsonl(const std::string& path, const std::vector<Record>& records);

/// Minimal CSV table; all cells preformatted strings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<std::string> cells);
  void write(const std::string& path) const;
  size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace modica

#endif
