#include "nlac/output.hpp"

#include <bit>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace nlac {

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; this platform is not");

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path, std::ios_base::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

void write_energy_csv(const std::string& path, const EnergyTrace& trace) {
  auto out = open_out(path, std::ios_base::out);
  out << "step,time,energy,fp_iters,convolutions\n";
  for (const auto& r : trace)
    out << r.step << ',' << format_double(r.time) << ',' << format_double(r.energy) << ','
        << r.fp_iters << ',' << r.convolutions << '\n';
  finish(out, path);
}

void write_error_csv(const std::string& path, const std::vector<ErrorRow>& rows) {
  auto out = open_out(path, std::ios_base::out);
  out << "tau,error,order\n";
  for (const auto& r : rows) {
    out << format_double(r.tau) << ',' << format_double(r.error) << ',';
    if (r.has_order) out << format_double(r.order);
    out << '\n';
  }
  finish(out, path);
}

void write_cost_csv(const std::string& path, const std::vector<CostRow>& rows) {
  auto out = open_out(path, std::ios_base::out);
  out << "tau,convolutions,error\n";
  for (const auto& r : rows)
    out << format_double(r.tau) << ',' << r.convolutions << ',' << format_double(r.error)
        << '\n';
  finish(out, path);
}

void write_coupled_csv(const std::string& path, const std::vector<CoupledTraceRow>& rows) {
  auto out = open_out(path, std::ios_base::out);
  out << "step,time,negative_fraction,max_abs_m,theta_min,theta_max\n";
  for (const auto& r : rows)
    out << r.step << ',' << format_double(r.time) << ','
        << format_double(r.negative_fraction) << ',' << format_double(r.max_abs_m) << ','
        << format_double(r.theta_min) << ',' << format_double(r.theta_max) << '\n';
  finish(out, path);
}

void write_snapshot(const std::string& path, const Field& u) {
  auto out = open_out(path, std::ios_base::out | std::ios_base::binary);
  out.write(reinterpret_cast<const char*>(u.data.data()),
            static_cast<std::streamsize>(u.data.size() * sizeof(double)));
  finish(out, path);
}

Field read_snapshot(const std::string& path, const Grid& g) {
  std::ifstream in(path, std::ios_base::in | std::ios_base::binary);
  if (!in) throw std::runtime_error("cannot open snapshot: " + path);
  Field u = make_field(g);
  in.read(reinterpret_cast<char*>(u.data.data()),
          static_cast<std::streamsize>(u.data.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(u.data.size() * sizeof(double)))
    throw std::runtime_error("snapshot shorter than the grid: " + path);
  return u;
}

void write_manifest(const std::string& path, const RunManifest& m) {
  nlohmann::json j;
  j["tool"] = "nlac";
  j["format"] = "float64-le-row-major";
  {
    char stamp[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm);
    j["created"] = stamp;  // wall-time field, excluded from determinism checks
  }
  j["grid"] = {{"dim", m.grid.dim},
               {"count", std::vector<int>(m.grid.count.begin(), m.grid.count.begin() + m.grid.dim)},
               {"half_extent", std::vector<double>(m.grid.half_extent.begin(),
                                                   m.grid.half_extent.begin() + m.grid.dim)}};
  if (m.kernel)
    j["kernel"] = {{"epsilon", m.kernel->epsilon}, {"delta", m.kernel->delta}};
  if (m.potential) {
    j["potential"] = {{"kind", to_string(m.potential->kind)}, {"c_F", m.potential->c_F}};
    if (m.potential->kind == PotentialKind::Logarithmic)
      j["potential"]["theta_c"] = m.potential->theta_c;
  }
  if (!m.scheme.empty()) j["scheme"] = m.scheme;
  if (!m.ic_name.empty()) {
    j["initial"] = {{"name", m.ic_name}};
    if (!m.ic_params.empty()) j["initial"]["params"] = m.ic_params;
  }
  if (m.seed) j["seed"] = *m.seed;
  if (!m.snapshot_files.empty()) j["snapshots"] = m.snapshot_files;
  if (!m.warnings.empty()) j["warnings"] = m.warnings;

  auto out = open_out(path, std::ios_base::out);
  out << j.dump(2) << '\n';
  finish(out, path);
}

}  // namespace nlac
