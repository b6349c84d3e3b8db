#pragma once

#include "smb/errors.hpp"

namespace smb {

// Left/right action side of a transporter insertion. The sign convention
// delta_sign(L) = +1, delta_sign(R) = -1 propagates through every bilinear.
enum class Side { L, R };

inline int delta_sign(Side z) { return z == Side::L ? +1 : -1; }

// Recursion coefficient C^{dl,dm}(l,m) for shifting an angular-momentum
// label by dl and its projection by dm, dl,dm in {-1,0,+1}.
// Out-of-range (l,m) inputs yield 0; shifts outside {-1,0,+1} are rejected.
double ladder_coefficient(int dl, int dm, int l, int m);

// l(l+1); negative l rejected.
double casimir(int l);

// Weight multiplying the quadratic angular operator in a single-rod
// bilinear: (1/4)csc^2(w/2), times cos(w) when the two sides differ.
// w at 0 or 2*pi is singular.
double gamma_factor(Side z, Side zp, double omega);

} // namespace smb
