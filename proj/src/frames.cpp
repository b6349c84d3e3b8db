#include "smb/frames.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace smb {

namespace {

double clamp1(double x) { return std::clamp(x, -1.0, 1.0); }

void check_rod(int kappa, int count) {
    if (kappa < 1 || kappa > count)
        throw RodUnknown("rod " + std::to_string(kappa) + " of " +
                         std::to_string(count));
}

} // namespace

Eigen::Matrix3d rotation_matrix(const EulerAngles &e) {
    const double ca = std::cos(e.alpha), sa = std::sin(e.alpha);
    const double cb = std::cos(e.beta), sb = std::sin(e.beta);
    const double cg = std::cos(e.gamma), sg = std::sin(e.gamma);
    Eigen::Matrix3d R;
    R << ca * cb * cg - sa * sg, -sa * cg - ca * cb * sg, ca * sb,
         sa * cb * cg + ca * sg, ca * cg - sa * cb * sg, sa * sb,
         -sb * cg, sb * sg, cb;
    return R;
}

Eigen::Vector3d body_direction(const BodyAngles &b, int kappa) {
    check_rod(kappa, b.rod_count());
    if (kappa == 1) return {0.0, 0.0, 1.0};
    if (kappa == 2) return {std::sin(b.Theta), 0.0, std::cos(b.Theta)};
    const auto &[th, ph] = b.rods[kappa - 3];
    return {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
            std::cos(th)};
}

Eigen::Vector3d lab_direction(const OriginalAngles &o, int kappa) {
    check_rod(kappa, o.rod_count());
    const auto &[th, ph] = o.rods[kappa - 1];
    return {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
            std::cos(th)};
}

std::pair<EulerAngles, BodyAngles>
original_to_sequestered(const OriginalAngles &o, double eps_coll) {
    const int count = o.rod_count();
    if (count < 2)
        throw RodUnknown("frame fixing needs at least two rods, got " +
                         std::to_string(count));
    const double th1 = o.rods[0][0], ph1 = o.rods[0][1];
    const double th2 = o.rods[1][0], ph2 = o.rods[1][1];

    const Eigen::Vector3d n1 = lab_direction(o, 1);
    const Eigen::Vector3d n2 = lab_direction(o, 2);

    BodyAngles body;
    const double cosTheta = clamp1(n1.dot(n2));
    body.Theta = std::acos(cosTheta);
    const double sinTheta = std::sin(body.Theta);
    if (std::abs(sinTheta) < eps_coll)
        throw FrameDegenerate("rods 1 and 2 collinear (sin Theta = " +
                              std::to_string(sinTheta) + ")");

    EulerAngles euler;
    euler.beta = th1;
    euler.alpha = ph1;
    const double cos_gamma = clamp1(
        -(std::sin(th1) * std::cos(th2) -
          std::cos(ph1 - ph2) * std::cos(th1) * std::sin(th2)) /
        sinTheta);

    // Both arccos branches are tried; the rotation that actually maps the
    // body-frame rod 2 onto its lab direction wins.
    const double g0 = std::acos(cos_gamma);
    double best_err = std::numeric_limits<double>::infinity();
    Eigen::Matrix3d R;
    const Eigen::Vector3d eta2{sinTheta, 0.0, cosTheta};
    for (double g : {g0, 2 * M_PI - g0}) {
        EulerAngles cand = euler;
        cand.gamma = g;
        const Eigen::Matrix3d Rc = rotation_matrix(cand);
        const double err = (Rc * eta2 - n2).norm();
        if (err < best_err) {
            best_err = err;
            euler.gamma = g;
            R = Rc;
        }
    }

    for (int mu = 3; mu <= count; ++mu) {
        const Eigen::Vector3d nmu = lab_direction(o, mu);
        const double costh = clamp1(n1.dot(nmu));
        const double theta = std::acos(costh);
        const double sinth = std::sin(theta);
        double phi = 0.0;
        if (std::abs(sinth) >= eps_coll) {
            const double cosphi =
                clamp1((n2.dot(nmu) - cosTheta * costh) / (sinTheta * sinth));
            const double p0 = std::acos(cosphi);
            double err_best = std::numeric_limits<double>::infinity();
            for (double p : {p0, 2 * M_PI - p0}) {
                const Eigen::Vector3d eta{sinth * std::cos(p),
                                          sinth * std::sin(p), costh};
                const double err = (R * eta - nmu).norm();
                if (err < err_best) {
                    err_best = err;
                    phi = p;
                }
            }
        }
        body.rods.push_back({theta, phi});
    }
    return {euler, body};
}

double pair_dot(const BodyAngles &b, int i, int j) {
    check_rod(i, b.rod_count());
    check_rod(j, b.rod_count());
    if (i == j) return 1.0;
    if (i > j) std::swap(i, j);
    const double cT = std::cos(b.Theta), sT = std::sin(b.Theta);
    if (i == 1 && j == 2) return cT;
    if (i == 1) return std::cos(b.rods[j - 3][0]);
    if (i == 2) {
        const auto &[th, ph] = b.rods[j - 3];
        return cT * std::cos(th) + std::cos(ph) * sT * std::sin(th);
    }
    const auto &[tm, pm] = b.rods[i - 3];
    const auto &[tn, pn] = b.rods[j - 3];
    return std::cos(tm) * std::cos(tn) +
           std::cos(pm - pn) * std::sin(tm) * std::sin(tn);
}

namespace {

double triple_ordered(const BodyAngles &b, int i, int j, int k) {
    const double cT = std::cos(b.Theta), sT = std::sin(b.Theta);
    if (i == 1 && j == 2) {
        const auto &[th, ph] = b.rods[k - 3];
        return sT * std::sin(th) * std::sin(ph);
    }
    if (i == 1) {
        const auto &[tm, pm] = b.rods[j - 3];
        const auto &[tn, pn] = b.rods[k - 3];
        return -std::sin(tm) * std::sin(tn) * std::sin(pm - pn);
    }
    if (i == 2) {
        const auto &[tm, pm] = b.rods[j - 3];
        const auto &[tn, pn] = b.rods[k - 3];
        return sT * (std::sin(tm) * std::sin(pm) * std::cos(tn) -
                     std::cos(tm) * std::sin(tn) * std::sin(pn)) -
               cT * std::sin(tm) * std::sin(tn) * std::sin(pm - pn);
    }
    const auto &[tm, pm] = b.rods[i - 3];
    const auto &[tn, pn] = b.rods[j - 3];
    const auto &[tl, pl] = b.rods[k - 3];
    return -std::cos(tm) * std::sin(tn) * std::sin(tl) * std::sin(pn - pl) +
           std::sin(tm) * std::cos(tn) * std::sin(tl) * std::sin(pm - pl) -
           std::sin(tm) * std::sin(tn) * std::cos(tl) * std::sin(pm - pn);
}

} // namespace

double pair_triple(const BodyAngles &b, int i, int j, int k,
                   bool *degenerate) {
    check_rod(i, b.rod_count());
    check_rod(j, b.rod_count());
    check_rod(k, b.rod_count());
    if (degenerate) *degenerate = false;
    if (i == j || j == k || i == k) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    // Cyclic rotations leave the product unchanged; a swap of the last two
    // indices flips the sign. Canonical order puts the smallest index first.
    int a = i, bb = j, c = k;
    double sign = 1.0;
    if (bb < a && bb <= c) {
        std::swap(a, bb);
        std::swap(bb, c); // (j,k,i)
    } else if (c < a && c <= bb) {
        std::swap(bb, c);
        std::swap(a, bb); // (k,i,j)
    }
    if (c < bb) {
        std::swap(bb, c);
        sign = -sign;
    }
    return sign * triple_ordered(b, a, bb, c);
}

} // namespace smb
