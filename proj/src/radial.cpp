#include "smb/radial.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "smb/errors.hpp"

namespace smb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Triplet = Eigen::Triplet<double>;

RealSparse from_triplets(int n, const std::vector<Triplet> &trips) {
    RealSparse m(n, n);
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    return m;
}

}  // namespace

double RadialGrid::step() const { return kTwoPi / (n_omega + 1); }

std::vector<double> RadialGrid::nodes() const {
    std::vector<double> out(n_omega);
    const double h = step();
    for (int j = 0; j < n_omega; ++j) out[j] = h * (j + 1);
    return out;
}

RadialGrid refine(const RadialGrid &g) { return RadialGrid{2 * g.n_omega + 1}; }

RealSparse second_derivative(const RadialGrid &g, StencilOrder order) {
    const int n = g.n_omega;
    if (n < 1) throw InvalidQuery("second_derivative: empty grid");
    const double h2 = g.step() * g.step();
    std::vector<Triplet> trips;
    if (order == StencilOrder::Second) {
        for (int j = 0; j < n; ++j) {
            trips.emplace_back(j, j, -2.0 / h2);
            if (j > 0) trips.emplace_back(j, j - 1, 1.0 / h2);
            if (j + 1 < n) trips.emplace_back(j, j + 1, 1.0 / h2);
        }
    } else {
        static constexpr double c[5] = {-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0,
                                        16.0 / 12.0, -1.0 / 12.0};
        for (int j = 0; j < n; ++j)
            for (int k = -2; k <= 2; ++k) {
                const int col = j + k;
                if (col < 0 || col >= n) continue;
                trips.emplace_back(j, col, c[k + 2] / h2);
            }
    }
    return from_triplets(n, trips);
}

RealSparse first_derivative(const RadialGrid &g, StencilOrder order) {
    const int n = g.n_omega;
    if (n < 1) throw InvalidQuery("first_derivative: empty grid");
    const double h = g.step();
    std::vector<Triplet> trips;
    if (order == StencilOrder::Second) {
        for (int j = 0; j < n; ++j) {
            if (j > 0) trips.emplace_back(j, j - 1, -0.5 / h);
            if (j + 1 < n) trips.emplace_back(j, j + 1, 0.5 / h);
        }
    } else {
        static constexpr double c[5] = {1.0 / 12.0, -8.0 / 12.0, 0.0,
                                        8.0 / 12.0, -1.0 / 12.0};
        for (int j = 0; j < n; ++j)
            for (int k = -2; k <= 2; ++k) {
                if (k == 0) continue;
                const int col = j + k;
                if (col < 0 || col >= n) continue;
                trips.emplace_back(j, col, c[k + 2] / h);
            }
    }
    return from_triplets(n, trips);
}

RealSparse diagonal_matrix(const RadialGrid &g,
                           const std::function<double(double)> &f) {
    const int n = g.n_omega;
    std::vector<Triplet> trips;
    trips.reserve(n);
    const auto ws = g.nodes();
    for (int j = 0; j < n; ++j) {
        const double v = f(ws[j]);
        if (!std::isfinite(v))
            throw RadialSingularity("diagonal coefficient diverges on a node");
        trips.emplace_back(j, j, v);
    }
    return from_triplets(n, trips);
}

RealSparse gamma_diagonal(const RadialGrid &g, bool same_side) {
    return diagonal_matrix(g, [same_side](double w) {
        const double s = std::sin(w / 2.0);
        if (s == 0.0) throw RadialSingularity("gamma factor pole on grid");
        const double base = 0.25 / (s * s);
        return same_side ? base : base * std::cos(w);
    });
}

RealSparse symmetrized_weighted_first(const RadialGrid &g,
                                      const std::function<double(double)> &w,
                                      StencilOrder order) {
    const RealSparse d1 = first_derivative(g, order);
    const RealSparse wd = diagonal_matrix(g, w);
    RealSparse out = 0.5 * (wd * d1 + d1 * wd).eval();
    out.makeCompressed();
    return out;
}

std::vector<OperatorTerm> substitute(const std::vector<OperatorTerm> &pre) {
    std::vector<OperatorTerm> post;
    post.reserve(pre.size() * 2);
    for (const OperatorTerm &t : pre) {
        switch (t.radial) {
        case RadialKind::SecondDerivative:
        case RadialKind::DiagGamma:
        case RadialKind::DiagCot:
        case RadialKind::DiagCotCot:
        case RadialKind::DiagOne:
            post.push_back(t);
            break;
        case RadialKind::FirstDerivative:
            if (t.cot_rod == t.deriv_rod) {
                OperatorTerm flat = t;
                flat.radial = RadialKind::DiagOne;
                flat.deriv_rod = 0;
                flat.cot_rod = 0;
                flat.prefactor *= 0.25;
                flat.coeff_label += ">flat";
                post.push_back(flat);
            } else {
                post.push_back(t);
                OperatorTerm diag = t;
                diag.prefactor *= -0.5;
                diag.coeff_label += ">diag";
                if (t.cot_rod == 0) {
                    diag.radial = RadialKind::DiagCot;
                    diag.cot_rod = t.deriv_rod;
                } else {
                    diag.radial = RadialKind::DiagCotCot;
                    diag.cot_rod = 0;
                }
                diag.deriv_rod = 0;
                post.push_back(diag);
            }
            break;
        case RadialKind::MixedDerivative: {
            post.push_back(t);
            OperatorTerm da = t;
            da.radial = RadialKind::FirstDerivative;
            da.deriv_rod = t.rod_a;
            da.cot_rod = t.rod_b;
            da.prefactor = -0.5 * t.prefactor;
            da.coeff_label += ">da";
            post.push_back(da);
            OperatorTerm db = da;
            db.deriv_rod = t.rod_b;
            db.cot_rod = t.rod_a;
            db.coeff_label = t.coeff_label + ">db";
            post.push_back(db);
            OperatorTerm diag = t;
            diag.radial = RadialKind::DiagCotCot;
            diag.deriv_rod = 0;
            diag.cot_rod = 0;
            diag.prefactor = 0.25 * t.prefactor;
            diag.coeff_label += ">diag";
            post.push_back(diag);
            break;
        }
        }
    }
    return post;
}

}  // namespace smb
