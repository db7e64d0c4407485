#pragma once

#include "vpmcf/field.hpp"

#include <string>

namespace vpmcf {

/// Field snapshot, 40-byte header followed by n^d little-endian f64 values
/// row-major (last axis fastest):
///   bytes  0..3   magic "VPMF"
///   bytes  4..7   format version (u32, currently 1)
///   bytes  8..11  d (u32)
///   bytes 12..15  n (u32)
///   bytes 16..23  eps (f64)
///   bytes 24..31  t (f64)
///   bytes 32..39  reserved, zero
/// Round-trips are bit-exact.
struct Snapshot {
    ScalarField phi;
    double eps = 0.0;
    double t = 0.0;
};

void write_snapshot(const std::string& path, const ScalarField& phi, double eps, double t);
Snapshot read_snapshot(const std::string& path);

} // namespace vpmcf
