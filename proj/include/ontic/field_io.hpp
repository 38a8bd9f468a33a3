#pragma once

#include <filesystem>
#include <iosfwd>

#include "ontic/mode_lattice.hpp"

namespace ontic {

/// Snapshot metadata carried alongside the samples.
struct SnapshotHeader {
  std::vector<int> grid_points;
  std::vector<double> box_lengths;
  double mass = 0.0;
  double time = 0.0;
  FieldSpace space = FieldSpace::position;
};

struct Snapshot {
  SnapshotHeader header;
  ComplexField field;
};

SnapshotHeader header_for(const ComplexField& field, const MomentumLattice& lattice);

/// CSV layout, UTF-8, comma delimited, 17 significant digits:
///
///   D,n_0[,n_1[,n_2]],L_0[,L_1[,L_2]],M,t,space
///   <values of the row above>
///   re,im
///   <one row per sample, row-major, last axis fastest>
void write_field_csv(std::ostream& out, const ComplexField& field, const MomentumLattice& lattice);
Snapshot read_field_csv(std::istream& in);

/// Binary layout, little-endian:
///   char[4] "ONTF", uint32 version (=1), int32 D, int32 n[D], float64 L[D],
///   float64 M, float64 t, uint8 space (0 position, 1 momentum),
///   then total_points pairs of float64 (re, im).
void write_field_binary(std::ostream& out, const ComplexField& field, const MomentumLattice& lattice);
Snapshot read_field_binary(std::istream& in);

void save_field_csv(const std::filesystem::path& path, const ComplexField& field,
                    const MomentumLattice& lattice);

/// Shortest-round-trip decimal form used by all CSV output.
std::string format_double(double v);

}  // namespace ontic
