#pragma once

#include "smb/errors.hpp"

#include <Eigen/Dense>

#include <array>
#include <utility>
#include <vector>

namespace smb {

// z-y-z Euler angles carrying the residual global rotation.
struct EulerAngles {
    double alpha = 0;
    double beta = 0;
    double gamma = 0;
};

// Rod directions expressed in the body frame: rod 1 is the z' axis, rod 2
// lies in the x'-z' plane at polar angle Theta, every further rod mu >= 3
// has spherical angles (theta_mu, phi_mu). rods[k] belongs to rod k+3.
struct BodyAngles {
    double Theta = 0;
    std::vector<std::array<double, 2>> rods;
    int rod_count() const { return static_cast<int>(rods.size()) + 2; }
};

// Lab-frame spherical angles (polar, azimuth) of every rod, rod index
// kappa = k+1 for entry k.
struct OriginalAngles {
    std::vector<std::array<double, 2>> rods;
    int rod_count() const { return static_cast<int>(rods.size()); }
};

Eigen::Matrix3d rotation_matrix(const EulerAngles &e);

// Unit vector of rod kappa (1-based) in the body frame.
Eigen::Vector3d body_direction(const BodyAngles &b, int kappa);

// Lab-frame unit vector of rod kappa from the original angles.
Eigen::Vector3d lab_direction(const OriginalAngles &o, int kappa);

// Invert the frame choice: recover Euler angles plus body-frame angles from
// lab-frame data. Azimuth branches are fixed by requiring the global
// round-trip R * eta_kappa = n_kappa, never by per-angle arccos alone.
// Rods 1 and 2 collinear within eps_coll is rejected.
std::pair<EulerAngles, BodyAngles>
original_to_sequestered(const OriginalAngles &o, double eps_coll = 1e-9);

// Frame-independent pair functions in body coordinates.
double pair_dot(const BodyAngles &b, int i, int j);
double pair_triple(const BodyAngles &b, int i, int j, int k,
                   bool *degenerate = nullptr);

} // namespace smb
