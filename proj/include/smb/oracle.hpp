#pragma once

#include <complex>
#include <vector>

#include "smb/angular_ops.hpp"
#include "smb/basis.hpp"

#include <Eigen/Dense>

namespace smb {

enum class FactorKind { PolarTower, SphericalHarmonic, BodyRotation };

struct EigenfunctionId {
  FactorKind kind = FactorKind::PolarTower;
  // PolarTower: a = n, b = sigma. SphericalHarmonic: a = l, b = m.
  // BodyRotation: a = L, b = M, c = N.
  int a = 0;
  int b = 0;
  int c = 0;
};

// Orthonormal Legendre tower: integral of the square over d(cos) equals 1,
// with the (-1)^m phase inside and P^{-m} = (-1)^m P^{+m}.
double alp_normalized(int l, int m, double x);

std::complex<double> sph_harm(int l, int m, double theta, double phi);

double wigner_small_d(int L, int M, int N, double beta);

// Body-rotation ket factor carrying the unit-normalization volume absorption.
std::complex<double> euler_factor(int L, int M, int N, double alpha,
                                  double beta, double gamma);

// angles: PolarTower {Theta}; SphericalHarmonic {theta, phi};
// BodyRotation {alpha, beta, gamma}.
std::complex<double> eigenfunction_value(const EigenfunctionId& id,
                                         const std::vector<double>& angles);

struct QuadratureSpec {
  int polar_nodes = 64;
  int azimuthal_nodes = 128;
  int fd_order = 8;
  double fd_step = 1e-3;
  double tolerance = 1e-10;
};

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights);

// Integrates bra* (op ket) over the coordinates the operator touches,
// collapsing untouched factors to exact label deltas. Derivatives are applied
// to the sampled ket by central finite differences.
std::complex<double> quadrature_matrix_element(const AngularOperatorId& op,
                                               const AngularState& bra,
                                               const AngularState& ket,
                                               const QuadratureSpec& q = {});

Eigen::MatrixXcd gram_matrix(const std::vector<AngularState>& states,
                             const QuadratureSpec& q = {});

struct SpectrumReference {
  std::vector<double> eigenvalues;
  std::vector<double> error_estimates;
  std::vector<int> ladder;
};

// Richardson-extrapolated lowest five eigenvalues of the one-link Hamiltonian
// (g^2/2a)(-D2 - 1/4) + (1/(2 g^2 a)) * 2 * (2 - 2 cos(w/2)) over a grid
// refinement ladder of at least three sizes.
SpectrumReference single_rod_spectrum_reference(double g,
                                                const std::vector<int>& ladder,
                                                double a = 1.0);

}  // namespace smb
