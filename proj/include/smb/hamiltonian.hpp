#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "smb/angular_ops.hpp"
#include "smb/basis.hpp"
#include "smb/lattice.hpp"
#include "smb/radial.hpp"

namespace smb {

// Which physical links play the two frame-fixing roles. Remaining links are
// ordinary rods, numbered 3.. in ascending kappa order.
struct RodRoles {
  int rod1_link = 1;
  int rod2_link = 2;
};

struct HamiltonianParams {
  double g = 1.0;
  double a = 1.0;
  Truncation truncation;
  bool pin_sector = true;  // false: enumerate every (L, M) block up to l_max
  int n_omega = 15;
  StencilOrder stencil = StencilOrder::Second;
  RodRoles roles;
  bool debug_provenance = false;
};

struct AssemblyReport {
  double asymmetry_norm = 0.0;   // Frobenius norm of (H - H^dag)/2 pre-clean
  double matrix_norm = 0.0;      // Frobenius norm of the symmetrized result
  long term_count = 0;           // operator terms materialized
  std::map<std::string, long> term_tally;  // filled when debug_provenance
};

struct AssembledOperator {
  CplxSparse matrix;
  BasisIndex angular;
  int n_rods = 0;
  int n_omega = 0;
  AssemblyReport report;

  // Global index layout: radial indices run fastest (rod 1 innermost),
  // the angular sector index slowest.
  long radial_dim() const;
  long dim() const;
};

AssembledOperator assemble_electric(const LatticeTree& tree,
                                    const HamiltonianParams& p);

AssembledOperator assemble_magnetic(const LatticeTree& tree,
                                    const HamiltonianParams& p);

// Lowest k eigenvalues by dense self-adjoint solve; guarded by TooLarge.
std::vector<double> spectrum(const CplxSparse& h, int k);

// Largest number of rods on which bra and ket of a nonzero entry differ,
// counting the internal polar tower as rod 2, the body multiplet as rod 1,
// and radial index changes as touching their rod.
int degree_of_coupling(const AssembledOperator& op);

}  // namespace smb
