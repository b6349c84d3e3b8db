#pragma once

#include <map>
#include <string>
#include <vector>

#include "smb/angular_ops.hpp"
#include "smb/lattice.hpp"
#include "smb/radial.hpp"

namespace smb {

struct CostQuery {
  int n_links = 2;
  int p = 1;
  double t = 1.0;
  double eps = 1e-2;
  double alpha_tilde = 1.0;
};

struct CountReport {
  long n_electric = 0;                    // coefficient-table support, dense envelope
  long n_magnetic = 0;                    // plaquette terms, one short word per link
  std::map<std::string, long> breakdown;  // per bilinear class
  int doc = 0;                            // links any one term acts on
};

// Closed-form term count for one bilinear class at a given link count.
long count_terms(int n_links, BilinearClass c);

// Full accounting: electric bilinear count (2 N_L)^2 over the dense
// coefficient table, the per-class expansion counts, a linear magnetic
// envelope, and the predicted degree of coupling.
CountReport count_terms(int n_links);

// Terms in the loop-trace expansion of every plaquette word of the lattice.
long count_magnetic_terms(const LatticeTree& tree);

// Links any one term acts on (reads a variable of), maximized over the
// electric catalog: min(n_links, 3).
int doc_predicted(int n_links);

// ceil(alpha_tilde^{1/p} t^{1+1/p} / eps^{1/p}), unit constant (envelope).
long trotter_steps(const CostQuery& q);

struct AlphaTilde {
  double value = 0.0;
  bool bound_only = false;
};

// Sum of spectral norms of pairwise commutators (both orderings) for p = 1,
// dense and exact up to dimension 2048; triangle-inequality bound otherwise.
AlphaTilde measure_alpha_tilde(const std::vector<CplxSparse>& terms, int p);

// N_L^2 log(N_L) (N_L^2 t + log(1/eps)), unit constant (envelope).
double qsp_gate_envelope(const CostQuery& q);

}  // namespace smb
