#pragma once

#include <functional>
#include <vector>

#include "smb/angular_ops.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace smb {

using RealSparse = Eigen::SparseMatrix<double>;
using CplxSparse = Eigen::SparseMatrix<std::complex<double>>;

// Open uniform grid on (0, 2pi): w_j = 2pi j / (n_omega + 1), j = 1..n_omega.
// Endpoint values are never stored; boundary rows assume zero there.
struct RadialGrid {
  int n_omega = 31;

  double step() const;
  std::vector<double> nodes() const;
};

// Doubles the resolution while keeping old nodes as a subset: 3 -> 7 -> 15.
RadialGrid refine(const RadialGrid& g);

enum class StencilOrder { Second, Fourth };

RealSparse second_derivative(const RadialGrid& g,
                             StencilOrder order = StencilOrder::Second);

RealSparse first_derivative(const RadialGrid& g,
                            StencilOrder order = StencilOrder::Second);

RealSparse diagonal_matrix(const RadialGrid& g,
                           const std::function<double(double)>& f);

// 1/(4 sin^2(w/2)), times cos(w) when the two parities differ.
RealSparse gamma_diagonal(const RadialGrid& g, bool same_side);

// (W D1 + D1 W) / 2 for a same-rod weighted first derivative.
RealSparse symmetrized_weighted_first(const RadialGrid& g,
                                      const std::function<double(double)>& w,
                                      StencilOrder order = StencilOrder::Second);

// Rewrites the printed bilinear decomposition in the flattened radial measure:
// same-rod weighted first derivatives disappear into a constant -1/4 shift,
// and cross-rod first-derivative terms are regrouped with compensating
// diagonal cot terms. Terms that carry no radial derivative pass through.
std::vector<OperatorTerm> substitute(const std::vector<OperatorTerm>& pre);

}  // namespace smb
