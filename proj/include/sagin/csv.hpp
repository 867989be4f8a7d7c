#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace sagin {

// Shortest round-trip representation; identical input gives identical text.
std::string format_double(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(std::initializer_list<std::string_view> cols);

  CsvWriter& operator<<(double v);
  CsvWriter& operator<<(long long v);
  CsvWriter& operator<<(int v) { return *this << static_cast<long long>(v); }
  CsvWriter& operator<<(std::size_t v) { return *this << static_cast<long long>(v); }
  CsvWriter& operator<<(std::string_view v);
  CsvWriter& operator<<(const char* v) { return *this << std::string_view(v); }
  void end_row();

 private:
  void sep();
  std::ostream& out_;
  bool first_ = true;
};

std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace sagin
