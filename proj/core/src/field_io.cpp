#include "dnp/field_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "dnp/error.hpp"

namespace dnp {

static_assert(std::endian::native == std::endian::little, "field dumps assume a little-endian host");

namespace {

std::ofstream open_out(const std::string& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw InputError("cannot open " + path + " for writing");
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw InputError("field dump is truncated");
  return v;
}

}  // namespace

void write_field_csv(const Trajectory& traj, const std::string& path) {
  auto out = open_out(path, false);
  const GridDomain& g = *traj.grid;
  out << (g.dim() == 1 ? "x,t,u\n" : "x,y,t,u\n");
  for (int s = 0; s < traj.n_snapshots(); ++s)
    for (int i = 0; i < g.size(); ++i) {
      const Vec& x = g.point(i);
      for (int a = 0; a < g.dim(); ++a) out << num(x(a)) << ',';
      out << num(traj.times[s]) << ',' << num(traj.fields[s][i]) << '\n';
    }
}

void write_series_csv(const Trajectory& traj, const std::string& path) {
  auto out = open_out(path, false);
  const GridDomain& g = *traj.grid;
  out << (g.dim() == 1 ? "t,sup_u,inf_u,interior_min,argmin_x\n" : "t,sup_u,inf_u,interior_min,argmin_x,argmin_y\n");
  for (int s = 0; s < traj.n_snapshots(); ++s) {
    int where = 0;
    const double m = traj.interior_min(s, &where);
    out << num(traj.times[s]) << ',' << num(traj.sup(s)) << ',' << num(traj.inf(s)) << ',' << num(m);
    for (int a = 0; a < g.dim(); ++a) out << ',' << num(g.point(where)(a));
    out << '\n';
  }
}

void write_field_binary(const Trajectory& traj, const std::string& path) {
  auto out = open_out(path, true);
  const GridDomain& g = *traj.grid;
  out.write("DNPF", 4);
  put<std::uint32_t>(out, 1);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim()));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(g.size()));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(traj.n_snapshots()));
  put<double>(out, g.spacing());
  for (int i = 0; i < g.size(); ++i)
    for (int a = 0; a < g.dim(); ++a) put<double>(out, g.point(i)(a));
  for (double t : traj.times) put<double>(out, t);
  for (const auto& f : traj.fields) out.write(reinterpret_cast<const char*>(f.data()), f.size() * sizeof(double));
  if (!out) throw InputError("failed writing " + path);
}

FieldDump read_field_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "DNPF", 4) != 0) throw InputError(path + " is not a field dump");
  FieldDump d;
  d.version = get<std::uint32_t>(in);
  if (d.version != 1) throw InputError("unsupported field dump version " + std::to_string(d.version));
  d.dim = get<std::uint32_t>(in);
  const auto np = get<std::uint64_t>(in);
  const auto ns = get<std::uint64_t>(in);
  d.spacing = get<double>(in);
  d.coords.resize(np * d.dim);
  d.times.resize(ns);
  d.values.resize(np * ns);
  for (double& v : d.coords) v = get<double>(in);
  for (double& v : d.times) v = get<double>(in);
  for (double& v : d.values) v = get<double>(in);
  return d;
}

}  // namespace dnp
