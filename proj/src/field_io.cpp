#include "ontic/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace ontic {

static_assert(std::endian::native == std::endian::little, "binary snapshots assume little-endian");

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

SnapshotHeader header_for(const ComplexField& field, const MomentumLattice& lattice) {
  check_shape(field, lattice);
  return {lattice.shape(), lattice.spec().box_lengths, lattice.mass(), field.time, field.space};
}

namespace {

const char* space_name(FieldSpace s) { return s == FieldSpace::position ? "position" : "momentum"; }

FieldSpace parse_space(const std::string& s) {
  if (s == "position") return FieldSpace::position;
  if (s == "momentum") return FieldSpace::momentum;
  throw DomainError("unknown field space '" + s + "'");
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    cells.push_back(cell);
  }
  return cells;
}

bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw DomainError("truncated binary snapshot");
  return v;
}

void validate_header(const SnapshotHeader& h) {
  if (h.grid_points.empty() || h.grid_points.size() > 3) throw DomainError("snapshot D must be 1..3");
  for (int n : h.grid_points)
    if (n <= 0) throw DomainError("snapshot grid size must be positive");
}

std::size_t total_points(const SnapshotHeader& h) {
  std::size_t n = 1;
  for (int v : h.grid_points) n *= static_cast<std::size_t>(v);
  return n;
}

}  // namespace

void write_field_csv(std::ostream& out, const ComplexField& field, const MomentumLattice& lattice) {
  const auto h = header_for(field, lattice);
  const int d = static_cast<int>(h.grid_points.size());
  out << "D";
  for (int i = 0; i < d; ++i) out << ",n_" << i;
  for (int i = 0; i < d; ++i) out << ",L_" << i;
  out << ",M,t,space\n" << d;
  for (int n : h.grid_points) out << ',' << n;
  for (double l : h.box_lengths) out << ',' << format_double(l);
  out << ',' << format_double(h.mass) << ',' << format_double(h.time) << ',' << space_name(h.space)
      << "\nre,im\n";
  for (const auto& v : field.values) out << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
}

Snapshot read_field_csv(std::istream& in) {
  std::string line;
  if (!next_line(in, line) || line.rfind("D,", 0) != 0) throw DomainError("missing snapshot header row");
  if (!next_line(in, line)) throw DomainError("missing snapshot header values");
  const auto cells = split_csv(line);
  if (cells.empty()) throw DomainError("empty snapshot header");
  Snapshot s;
  const int d = std::stoi(cells[0]);
  if (d < 1 || d > 3 || cells.size() != static_cast<std::size_t>(2 * d + 4))
    throw DomainError("malformed snapshot header");
  for (int i = 0; i < d; ++i) s.header.grid_points.push_back(std::stoi(cells[1 + i]));
  for (int i = 0; i < d; ++i) s.header.box_lengths.push_back(std::stod(cells[1 + d + i]));
  s.header.mass = std::stod(cells[1 + 2 * d]);
  s.header.time = std::stod(cells[2 + 2 * d]);
  s.header.space = parse_space(cells[3 + 2 * d]);
  validate_header(s.header);
  if (!next_line(in, line) || line != "re,im") throw DomainError("missing re,im column header");
  const std::size_t n = total_points(s.header);
  s.field = {s.header.space, s.header.grid_points, {}, s.header.time};
  s.field.values.reserve(n);
  while (next_line(in, line)) {
    if (line.empty()) continue;
    const auto c = split_csv(line);
    if (c.size() != 2) throw DomainError("malformed snapshot row: " + line);
    s.field.values.emplace_back(std::stod(c[0]), std::stod(c[1]));
  }
  if (s.field.values.size() != n) throw DomainError("snapshot row count does not match header");
  return s;
}

void write_field_binary(std::ostream& out, const ComplexField& field, const MomentumLattice& lattice) {
  const auto h = header_for(field, lattice);
  out.write("ONTF", 4);
  put<std::uint32_t>(out, 1);
  put<std::int32_t>(out, static_cast<std::int32_t>(h.grid_points.size()));
  for (int n : h.grid_points) put<std::int32_t>(out, n);
  for (double l : h.box_lengths) put<double>(out, l);
  put<double>(out, h.mass);
  put<double>(out, h.time);
  put<std::uint8_t>(out, h.space == FieldSpace::position ? 0 : 1);
  for (const auto& v : field.values) {
    put<double>(out, v.real());
    put<double>(out, v.imag());
  }
}

Snapshot read_field_binary(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "ONTF", 4) != 0) throw DomainError("not an ONTF snapshot");
  if (get<std::uint32_t>(in) != 1) throw DomainError("unsupported snapshot version");
  Snapshot s;
  const auto d = get<std::int32_t>(in);
  if (d < 1 || d > 3) throw DomainError("snapshot D must be 1..3");
  for (int i = 0; i < d; ++i) s.header.grid_points.push_back(get<std::int32_t>(in));
  for (int i = 0; i < d; ++i) s.header.box_lengths.push_back(get<double>(in));
  s.header.mass = get<double>(in);
  s.header.time = get<double>(in);
  const auto space = get<std::uint8_t>(in);
  if (space > 1) throw DomainError("bad snapshot space tag");
  s.header.space = space == 0 ? FieldSpace::position : FieldSpace::momentum;
  validate_header(s.header);
  const std::size_t n = total_points(s.header);
  s.field = {s.header.space, s.header.grid_points, std::vector<Complex>(n), s.header.time};
  for (auto& v : s.field.values) {
    const double re = get<double>(in);
    const double im = get<double>(in);
    v = {re, im};
  }
  return s;
}

void save_field_csv(const std::filesystem::path& path, const ComplexField& field,
                    const MomentumLattice& lattice) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot open " + path.string());
  write_field_csv(out, field, lattice);
  if (!out) throw std::ios_base::failure("write failed for " + path.string());
}

}  // namespace ontic
