#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dnp/parabolic.hpp"

namespace dnp {

/// Rows x[,y],t,u for every snapshot and node, printed with 17 significant digits.
void write_field_csv(const Trajectory& traj, const std::string& path);

/// Rows t,sup_u,inf_u,interior_min,argmin_x[,argmin_y].
void write_series_csv(const Trajectory& traj, const std::string& path);

/// Little-endian binary dump:
///   char[4] "DNPF", u32 version (1), u32 dim, u64 n_points, u64 n_snapshots,
///   f64 spacing, f64 coords[n_points][dim], f64 times[n_snapshots],
///   f64 values[n_snapshots][n_points] (row-major).
void write_field_binary(const Trajectory& traj, const std::string& path);

struct FieldDump {
  std::uint32_t version = 0;
  std::uint32_t dim = 0;
  double spacing = 0.0;
  std::vector<double> coords;
  std::vector<double> times;
  std::vector<double> values;
  [[nodiscard]] std::size_t n_points() const { return dim == 0 ? 0 : coords.size() / dim; }
};

/// Reads a dump written by write_field_binary. Throws InputError on malformed files.
FieldDump read_field_binary(const std::string& path);

}  // namespace dnp
