#pragma once

#include "kch/coupling.hpp"
#include "kch/errors.hpp"

#include <iosfwd>
#include <string>

namespace kch {

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);

/// "t,v_h35,...,piola_residual"
std::string csv_header();
std::string csv_row(const OutputRow& row);

/// "nu,ok,<NormReport labels as max_<label>>,failure"
std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRow& row);

// Snapshot byte layout (little-endian throughout):
//   0   4 bytes  magic "KCH1"
//   4   uint32   N1
//   8   uint32   N2
//  12   uint32   N3
//  16   float64  t
//  24   float64  w[N1*N2], w_t[N1*N2], v1, v2, v3, q [N1*N2*N3 each]
// Arrays are stored with index (k*N2 + j)*N1 + i.
struct Snapshot {
    int n1 = 0, n2 = 0, n3 = 0;
    double t = 0.0;
    SurfaceField w, w_t;
    Vec3Field v;
    VolumeField q;
};

Snapshot snapshot_of(const SystemState& state);
void write_snapshot(std::ostream& out, const Snapshot& snap);
/// Throws ConfigError on a bad magic, a truncated stream or inconsistent sizes.
Snapshot read_snapshot(std::istream& in);
void save_snapshot(const std::string& path, const Snapshot& snap);
Snapshot load_snapshot(const std::string& path);

/// Initial data from a snapshot: v0 = v, w0 = w, w1 = w_t.
InitialData initial_data_of(const Snapshot& snap);

}  // namespace kch
