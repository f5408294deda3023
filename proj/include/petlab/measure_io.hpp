#pragma once

#include <iosfwd>
#include <string>

#include "petlab/measure.hpp"

namespace petlab {

// CSV: header "n,value" then one row per n in [1, size], values with 12
// significant digits. The label and modulus are not part of the CSV; the
// reader takes them as arguments (modulus 0 means "use the row count").
void write_measure_csv(std::ostream& out, const Measure& m);
Measure read_measure_csv(std::istream& in, MeasureLabel label = MeasureLabel::Custom,
                         std::int64_t modulus = 0);

// Binary layout, all integers little-endian:
//   bytes 0..3   magic "PLMS"
//   bytes 4..11  label, ASCII, NUL-padded to 8 bytes
//   bytes 12..19 N (uint64)
//   bytes 20..27 modulus (uint64)
//   then N IEEE-754 binary64 values, little-endian
void write_measure_binary(std::ostream& out, const Measure& m);
Measure read_measure_binary(std::istream& in);

// Dispatches on extension: ".bin" is binary, anything else CSV.
Measure load_measure(const std::string& path);
void save_measure(const std::string& path, const Measure& m);

}  // namespace petlab
