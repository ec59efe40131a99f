#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>

#include "qvhedge/types.hpp"

namespace qvhedge {

/// Minimal RFC 4180 writer. Doubles are written with 17 significant digits so
/// files round-trip and identical inputs give byte-identical output.
class CsvWriter {
public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void row(std::initializer_list<std::string_view> fields);

  void begin_row() { first_ = true; }
  void field(std::string_view text);
  void field(double value);
  void field(std::uint64_t value);
  void field(Complex value);  // two columns: re, im
  void end_row();

private:
  void separator();

  std::ostream& out_;
  bool first_ = true;
};

std::string format_double(double value);

}  // namespace qvhedge
