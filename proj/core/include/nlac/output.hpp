#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nlac/coupled.hpp"
#include "nlac/grid.hpp"
#include "nlac/kernel.hpp"
#include "nlac/potentials.hpp"
#include "nlac/stepper.hpp"

namespace nlac {

// CSV with header step,time,energy,fp_iters,convolutions; reals as %.17g.
void write_energy_csv(const std::string& path, const EnergyTrace& trace);

struct ErrorRow {
  double tau = 0.0;
  double error = 0.0;
  double order = 0.0;
  bool has_order = false;  // first ladder row has no order
};
// CSV with header tau,error,order; the order cell is empty when absent.
void write_error_csv(const std::string& path, const std::vector<ErrorRow>& rows);

struct CostRow {
  double tau = 0.0;
  std::uint64_t convolutions = 0;
  double error = 0.0;
};
// CSV with header tau,convolutions,error.
void write_cost_csv(const std::string& path, const std::vector<CostRow>& rows);

// CSV with header step,time,negative_fraction,max_abs_m,theta_min,theta_max.
void write_coupled_csv(const std::string& path, const std::vector<CoupledTraceRow>& rows);

// Flat little-endian float64 in row-major node order; exactly 8 bytes/node.
void write_snapshot(const std::string& path, const Field& u);
Field read_snapshot(const std::string& path, const Grid& g);

// Sidecar describing a run; serialized as JSON.
struct RunManifest {
  Grid grid;
  std::optional<KernelSpec> kernel;
  std::optional<PotentialSpec> potential;
  std::map<std::string, std::string> scheme;  // free-form scheme/coupled params
  std::string ic_name;
  std::map<std::string, double> ic_params;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> snapshot_files;
  std::vector<std::string> warnings;
};
void write_manifest(const std::string& path, const RunManifest& m);

std::string format_double(double v);  // %.17g

}  // namespace nlac
