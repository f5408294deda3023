#include "petlab/measure_io.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "petlab/errors.hpp"

namespace petlab {

namespace {

constexpr std::array<char, 4> kMagic{'P', 'L', 'M', 'S'};

std::string format12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<unsigned char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b.data()), 8);
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 8))
    throw InvalidArgument("binary measure: truncated input");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
  return v;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

void write_measure_csv(std::ostream& out, const Measure& m) {
  out << "n,value\n";
  for (std::int64_t n = 1; n <= m.size(); ++n) out << n << ',' << format12(m.values(n - 1)) << '\n';
}

Measure read_measure_csv(std::istream& in, MeasureLabel label, std::int64_t modulus) {
  std::string line;
  std::vector<double> values;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("n,", 0) == 0) continue;  // header
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw InvalidArgument("measure CSV line " + std::to_string(line_no) + ": expected 'n,value'");
    std::int64_t n = 0;
    double v = 0;
    try {
      n = std::stoll(line.substr(0, comma));
      v = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw InvalidArgument("measure CSV line " + std::to_string(line_no) + ": unparsable row");
    }
    if (n != static_cast<std::int64_t>(values.size()) + 1)
      throw InvalidArgument("measure CSV line " + std::to_string(line_no) +
                            ": indices must run 1,2,3,...");
    values.push_back(v);
  }
  Eigen::VectorXd vec = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  const auto size = static_cast<std::int64_t>(values.size());
  return Measure(std::move(vec), modulus > 0 ? modulus : size, label);
}

void write_measure_binary(std::ostream& out, const Measure& m) {
  out.write(kMagic.data(), 4);
  std::array<char, 8> label{};
  const std::string_view name = to_string(m.label);
  std::memcpy(label.data(), name.data(), std::min<std::size_t>(8, name.size()));
  out.write(label.data(), 8);
  put_u64(out, static_cast<std::uint64_t>(m.size()));
  put_u64(out, static_cast<std::uint64_t>(m.modulus));
  for (std::int64_t i = 0; i < m.size(); ++i) put_u64(out, std::bit_cast<std::uint64_t>(m.values(i)));
}

Measure read_measure_binary(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), 4) || magic != kMagic) throw InvalidArgument("binary measure: bad magic");
  std::array<char, 8> label{};
  if (!in.read(label.data(), 8)) throw InvalidArgument("binary measure: truncated header");
  const std::string name(label.data(), strnlen(label.data(), 8));
  const std::uint64_t n = get_u64(in);
  const std::uint64_t modulus = get_u64(in);
  if (n > (std::uint64_t{1} << 34)) throw ResourceError("binary measure: implausible length");
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (std::uint64_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = std::bit_cast<double>(get_u64(in));
  return Measure(std::move(v), static_cast<std::int64_t>(modulus), measure_label_from_string(name));
}

Measure load_measure(const std::string& path) {
  const bool binary = ends_with(path, ".bin");
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw InvalidArgument("cannot open measure file '" + path + "'");
  return binary ? read_measure_binary(in) : read_measure_csv(in);
}

void save_measure(const std::string& path, const Measure& m) {
  const bool binary = ends_with(path, ".bin");
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw InvalidArgument("cannot write measure file '" + path + "'");
  if (binary)
    write_measure_binary(out, m);
  else
    write_measure_csv(out, m);
}

}  // namespace petlab
