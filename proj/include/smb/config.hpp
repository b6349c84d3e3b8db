#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smb/basis.hpp"
#include "smb/hamiltonian.hpp"
#include "smb/lattice.hpp"

namespace smb {

struct RunConfig {
  LatticeSpec lattice;
  std::optional<std::vector<int>> tree_links;  // explicit tree; default comb
  RodRoles roles;
  Truncation truncation;
  bool pin_sector = true;
  int n_omega = 15;
  StencilOrder stencil = StencilOrder::Second;
  double g = 1.0;
  double a = 1.0;
  double tolerance = 1e-10;
  int threads = 0;  // 0: hardware concurrency
  std::string out_dir = ".";
  bool debug_provenance = false;
};

// Parses the JSON config file; unknown keys, type mismatches, and
// inconsistent sections raise ConfigError naming the offending field.
RunConfig load_config(const std::string& path);

// Renders a config back to canonical JSON text (sorted keys, 17 significant
// digits); reparsing yields an equivalent RunConfig.
std::string render_config(const RunConfig& c);

HamiltonianParams hamiltonian_params(const RunConfig& c);

LatticeTree build_lattice(const RunConfig& c);

}  // namespace smb
