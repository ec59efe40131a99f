#include "qvhedge/csv.hpp"

#include <cstdio>
#include <ostream>

namespace qvhedge {

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void CsvWriter::separator() {
  if (!first_) out_ << ',';
  first_ = false;
}

void CsvWriter::row(std::initializer_list<std::string_view> fields) {
  begin_row();
  for (auto f : fields) field(f);
  end_row();
}

void CsvWriter::field(std::string_view text) {
  separator();
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) {
    out_ << text;
    return;
  }
  out_ << '"';
  for (char ch : text) {
    if (ch == '"') out_ << '"';
    out_ << ch;
  }
  out_ << '"';
}

void CsvWriter::field(double value) {
  separator();
  out_ << format_double(value);
}

void CsvWriter::field(std::uint64_t value) {
  separator();
  out_ << value;
}

void CsvWriter::field(Complex value) {
  field(value.real());
  field(value.imag());
}

void CsvWriter::end_row() { out_ << "\r\n"; }

}  // namespace qvhedge
