#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "smb/angular_ops.hpp"
#include "smb/coeffs.hpp"
#include "smb/errors.hpp"
#include "smb/radial.hpp"

using namespace smb;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd dense(const RealSparse &m) { return Eigen::MatrixXd(m); }

double lowest_eigenvalue(const RadialGrid &g, StencilOrder order) {
    Eigen::MatrixXd m = -dense(second_derivative(g, order));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    return es.eigenvalues()(0);
}

void check_same_term(const OperatorTerm &got, const OperatorTerm &want) {
    CHECK(got.radial == want.radial);
    CHECK(got.rod_a == want.rod_a);
    CHECK(got.rod_b == want.rod_b);
    CHECK(got.deriv_rod == want.deriv_rod);
    CHECK(got.cot_rod == want.cot_rod);
    CHECK(got.za == want.za);
    CHECK(got.zb == want.zb);
    CHECK(got.op == want.op);
    CHECK(got.prefactor == want.prefactor);
    CHECK(got.coeff_label == want.coeff_label);
}

}  // namespace

TEST_CASE("uniform open grid with dyadic refinement") {
    RadialGrid def{};
    CHECK(def.n_omega == 31);

    RadialGrid g3{3};
    CHECK(g3.step() == doctest::Approx(kPi / 2.0).epsilon(1e-15));
    const auto nodes = g3.nodes();
    REQUIRE(nodes.size() == 3);
    CHECK(nodes[0] == doctest::Approx(kPi / 2.0).epsilon(1e-15));
    CHECK(nodes[1] == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(nodes[2] == doctest::Approx(3.0 * kPi / 2.0).epsilon(1e-15));

    for (int n : {3, 7, 31, 100}) {
        RadialGrid g{n};
        const auto ws = g.nodes();
        REQUIRE(static_cast<int>(ws.size()) == n);
        const double h = g.step();
        CHECK(ws.front() > 0.0);
        CHECK(ws.back() < 2.0 * kPi);
        CHECK(ws.front() == doctest::Approx(h).epsilon(1e-15));
        CHECK(2.0 * kPi - ws.back() == doctest::Approx(h).epsilon(1e-12));
        for (size_t j = 1; j < ws.size(); ++j)
            CHECK(ws[j] - ws[j - 1] == doctest::Approx(h).epsilon(1e-12));
    }

    RadialGrid g = g3;
    for (int expected : {7, 15, 31, 63}) {
        const auto coarse = g.nodes();
        g = refine(g);
        CHECK(g.n_omega == expected);
        const auto fine = g.nodes();
        CHECK(g.step() == coarse[0] / 2.0);
        for (size_t i = 0; i < coarse.size(); ++i)
            CHECK(fine[2 * i + 1] == coarse[i]);
    }
}

TEST_CASE("three point second derivative entries and the exact dirichlet spectrum") {
    RadialGrid g3{3};
    const double h2 = g3.step() * g3.step();
    Eigen::MatrixXd d2 = dense(second_derivative(g3));
    REQUIRE(d2.rows() == 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j)
                CHECK(d2(i, j) == -2.0 / h2);
            else if (std::abs(i - j) == 1)
                CHECK(d2(i, j) == 1.0 / h2);
            else
                CHECK(d2(i, j) == 0.0);
        }

    RadialGrid g{31};
    const int n = g.n_omega;
    Eigen::MatrixXd m = -dense(second_derivative(g));
    CHECK((m - m.transpose()).norm() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const double h = g.step();
    for (int k = 1; k <= n; ++k) {
        const double s = std::sin(k * kPi / (2.0 * (n + 1)));
        const double closed = 4.0 / (h * h) * s * s;
        CHECK(es.eigenvalues()(k - 1) ==
              doctest::Approx(closed).epsilon(1e-12));
    }
}

TEST_CASE("lowest eigenvalue approaches one quarter at second order") {
    std::vector<double> errs;
    for (int n : {31, 63, 127})
        errs.push_back(std::abs(lowest_eigenvalue(RadialGrid{n},
                                                  StencilOrder::Second) -
                                0.25));
    CHECK(errs[0] > errs[1]);
    CHECK(errs[1] > errs[2]);
    const double p01 = std::log2(errs[0] / errs[1]);
    const double p12 = std::log2(errs[1] / errs[2]);
    CHECK(p01 == doctest::Approx(2.0).epsilon(0.1));
    CHECK(p12 == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("wide stencils gain two orders away from the edges") {
    auto band_errors = [](int n) {
        RadialGrid g{n};
        const auto ws = g.nodes();
        Eigen::VectorXd u(n), d1(n), d2(n);
        for (int j = 0; j < n; ++j) {
            const double x = ws[j] - kPi;
            u[j] = std::exp(-2.0 * x * x);
            d1[j] = -4.0 * x * u[j];
            d2[j] = (16.0 * x * x - 4.0) * u[j];
        }
        auto band = [&](const Eigen::VectorXd &got, const Eigen::VectorXd &want) {
            double worst = 0.0;
            for (int j = n / 4; j <= 3 * n / 4; ++j)
                worst = std::max(worst, std::abs(got[j] - want[j]));
            return worst;
        };
        struct Out {
            double d2s, d2f, d1s, d1f;
        };
        return Out{band(dense(second_derivative(g, StencilOrder::Second)) * u, d2),
                   band(dense(second_derivative(g, StencilOrder::Fourth)) * u, d2),
                   band(dense(first_derivative(g, StencilOrder::Second)) * u, d1),
                   band(dense(first_derivative(g, StencilOrder::Fourth)) * u, d1)};
    };
    const auto a = band_errors(63);
    const auto b = band_errors(127);
    const auto c = band_errors(255);

    CHECK(std::log2(a.d2s / b.d2s) == doctest::Approx(2.0).epsilon(0.15));
    CHECK(std::log2(a.d1s / b.d1s) == doctest::Approx(2.0).epsilon(0.15));
    CHECK(std::log2(a.d2f / b.d2f) == doctest::Approx(4.0).epsilon(0.1));
    CHECK(std::log2(b.d2f / c.d2f) == doctest::Approx(4.0).epsilon(0.1));
    CHECK(std::log2(a.d1f / b.d1f) == doctest::Approx(4.0).epsilon(0.1));
    CHECK(std::log2(b.d1f / c.d1f) == doctest::Approx(4.0).epsilon(0.1));
    CHECK(b.d2f < b.d2s);
    CHECK(b.d1f < b.d1s);
}

TEST_CASE("first derivative matrices are exactly antisymmetric") {
    for (int n : {3, 17, 64}) {
        RadialGrid g{n};
        for (auto order : {StencilOrder::Second, StencilOrder::Fourth}) {
            Eigen::MatrixXd d1 = dense(first_derivative(g, order));
            CHECK((d1 + d1.transpose()).norm() == 0.0);
        }
    }

    RadialGrid g{33};
    const int n = g.n_omega;
    const auto ws = g.nodes();

    Eigen::VectorXd lin(n);
    for (int j = 0; j < n; ++j) lin[j] = ws[j];
    Eigen::VectorXd got = dense(first_derivative(g, StencilOrder::Second)) * lin;
    for (int j = 1; j + 1 < n; ++j)
        CHECK(got[j] == doctest::Approx(1.0).epsilon(1e-12));

    Eigen::VectorXd cub(n);
    for (int j = 0; j < n; ++j) cub[j] = ws[j] * ws[j] * ws[j];
    got = dense(first_derivative(g, StencilOrder::Fourth)) * cub;
    for (int j = 2; j + 2 < n; ++j)
        CHECK(got[j] == doctest::Approx(3.0 * ws[j] * ws[j]).epsilon(1e-11));
}

TEST_CASE("diagonal sampling and the parity weights") {
    RadialGrid g3{3};
    Eigen::MatrixXd cosm =
        dense(diagonal_matrix(g3, [](double w) { return std::cos(w / 2.0); }));
    CHECK(cosm(0, 0) == doctest::Approx(std::cos(kPi / 4.0)).epsilon(1e-15));
    CHECK(std::abs(cosm(1, 1)) < 1e-15);
    CHECK(cosm(2, 2) == doctest::Approx(-std::cos(kPi / 4.0)).epsilon(1e-15));
    CHECK(cosm(0, 1) == 0.0);
    CHECK(cosm(1, 2) == 0.0);

    Eigen::MatrixXd same = dense(gamma_diagonal(g3, true));
    CHECK(same(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(same(1, 1) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(same(2, 2) == doctest::Approx(0.5).epsilon(1e-14));

    Eigen::MatrixXd opp = dense(gamma_diagonal(g3, false));
    CHECK(std::abs(opp(0, 0)) < 1e-15);
    CHECK(opp(1, 1) == doctest::Approx(-0.25).epsilon(1e-14));
    CHECK(std::abs(opp(2, 2)) < 1e-15);

    RadialGrid g{41};
    const auto ws = g.nodes();
    Eigen::MatrixXd ll = dense(gamma_diagonal(g, true));
    Eigen::MatrixXd lr = dense(gamma_diagonal(g, false));
    for (int j = 0; j < g.n_omega; ++j) {
        CHECK(ll(j, j) ==
              doctest::Approx(gamma_factor(Side::L, Side::L, ws[j]))
                  .epsilon(1e-13));
        CHECK(ll(j, j) ==
              doctest::Approx(gamma_factor(Side::R, Side::R, ws[j]))
                  .epsilon(1e-13));
        CHECK(lr(j, j) ==
              doctest::Approx(gamma_factor(Side::L, Side::R, ws[j]))
                  .epsilon(1e-13));
        CHECK(lr(j, j) ==
              doctest::Approx(gamma_factor(Side::R, Side::L, ws[j]))
                  .epsilon(1e-13));
    }

    CHECK_THROWS_AS(diagonal_matrix(g3,
                                    [](double w) {
                                        return std::abs(w - kPi) < 1e-9
                                                   ? INFINITY
                                                   : 1.0;
                                    }),
                    RadialSingularity);
}

TEST_CASE("symmetrized weighted first derivative") {
    RadialGrid g{25};
    Eigen::MatrixXd plain = dense(first_derivative(g));
    Eigen::MatrixXd unit =
        dense(symmetrized_weighted_first(g, [](double) { return 1.0; }));
    CHECK((unit - plain).norm() == 0.0);

    Eigen::MatrixXd weighted = dense(symmetrized_weighted_first(
        g, [](double w) { return 1.0 / std::tan(w / 2.0); }));
    CHECK((weighted + weighted.transpose()).norm() < 1e-12);

    auto central_error = [](int n) {
        RadialGrid fine{n};
        const auto ws = fine.nodes();
        Eigen::MatrixXd s = dense(symmetrized_weighted_first(
            fine, [](double w) { return 1.0 / std::tan(w / 2.0); }));
        Eigen::VectorXd u(n);
        for (int j = 0; j < n; ++j) u[j] = std::sin(ws[j]);
        Eigen::VectorXd got = s * u;
        double worst = 0.0;
        for (int j = n / 4; j <= 3 * n / 4; ++j) {
            const double w = ws[j];
            const double half = std::sin(w / 2.0);
            const double target = std::cos(w) / std::tan(w / 2.0) -
                                  std::sin(w) / (4.0 * half * half);
            worst = std::max(worst, std::abs(got[j] - target));
        }
        return worst;
    };
    const double e255 = central_error(255);
    const double e511 = central_error(511);
    CHECK(e255 < 2e-4);
    CHECK(e511 < 0.35 * e255);
}

TEST_CASE("flattening the measure trades the weighted derivative for a quarter shift") {
    auto central_gap = [](int n) {
        RadialGrid g{n};
        const auto ws = g.nodes();
        Eigen::MatrixXd d2 = dense(second_derivative(g));
        Eigen::MatrixXd d1 = dense(first_derivative(g));
        Eigen::VectorXd u(n), half(n), cot(n);
        for (int j = 0; j < n; ++j) {
            const double w = ws[j];
            u[j] = std::exp(-2.0 * (w - kPi) * (w - kPi));
            half[j] = std::sin(w / 2.0);
            cot[j] = 1.0 / std::tan(w / 2.0);
        }
        Eigen::VectorXd psi = (u.array() / half.array()).matrix();
        Eigen::VectorXd lhs =
            half.asDiagonal() *
            ((-d2 - Eigen::MatrixXd(cot.asDiagonal()) * d1) * psi);
        Eigen::VectorXd rhs = -d2 * u - 0.25 * u;
        double worst = 0.0;
        for (int j = n / 4; j <= 3 * n / 4; ++j)
            worst = std::max(worst, std::abs(lhs[j] - rhs[j]));
        return worst;
    };
    const double g255 = central_gap(255);
    const double g511 = central_gap(511);
    CHECK(g255 < 1e-3);
    CHECK(g511 < 0.35 * g255);
}

TEST_CASE("substitution collapses the same rod weighted derivative") {
    const auto pre = bilinear_terms(3, 3, Side::L, Side::L, 4);
    REQUIRE(pre.size() == 3);
    const auto post = substitute(pre);
    REQUIRE(post.size() == 3);

    check_same_term(post[0], pre[0]);
    CHECK(post[0].radial == RadialKind::SecondDerivative);
    CHECK(post[0].prefactor == std::complex<double>(-1.0, 0.0));

    CHECK(post[1].radial == RadialKind::DiagOne);
    CHECK(post[1].prefactor == std::complex<double>(-0.25, 0.0));
    CHECK(post[1].coeff_label == "cot.d>flat");
    CHECK(post[1].deriv_rod == 0);
    CHECK(post[1].cot_rod == 0);
    CHECK(post[1].rod_a == 3);
    CHECK(post[1].op == pre[1].op);

    check_same_term(post[2], pre[2]);
    CHECK(post[2].radial == RadialKind::DiagGamma);
    CHECK(post[2].op == AngularOperatorId{AngKind::RodCasimir, 3});

    const auto rod1 = substitute(bilinear_terms(1, 1, Side::L, Side::R, 3));
    REQUIRE(rod1.size() == 5);
    CHECK(rod1[1].radial == RadialKind::DiagOne);
    CHECK(rod1[1].prefactor == std::complex<double>(-0.25, 0.0));
    CHECK(rod1[1].coeff_label == "cot.d>flat");
    CHECK(rod1[2].op == AngularOperatorId{AngKind::SigmaCasimir});
    CHECK(rod1[3].op == AngularOperatorId{AngKind::InternalCasimir});
    CHECK(rod1[4].op == AngularOperatorId{AngKind::SigmaDotLambda2});
    CHECK(rod1[4].prefactor == std::complex<double>(-2.0, 0.0));

    const auto lone = substitute(bilinear_terms(1, 1, Side::L, Side::L, 1));
    REQUIRE(lone.size() == 3);
    CHECK(lone[2].op == AngularOperatorId{AngKind::TotalCasimir});
}

TEST_CASE("substitution lineage for a cross rod pair") {
    const auto pre = bilinear_terms(3, 4, Side::L, Side::R, 5);
    REQUIRE(pre.size() == 9);
    const auto post = substitute(pre);
    REQUIRE(post.size() == 16);

    check_same_term(post[0], pre[0]);
    CHECK(post[0].radial == RadialKind::MixedDerivative);

    CHECK(post[1].radial == RadialKind::FirstDerivative);
    CHECK(post[1].deriv_rod == 3);
    CHECK(post[1].cot_rod == 4);
    CHECK(post[1].prefactor == -0.5 * pre[0].prefactor);
    CHECK(post[1].coeff_label == pre[0].coeff_label + ">da");
    CHECK(post[1].op == pre[0].op);

    CHECK(post[2].radial == RadialKind::FirstDerivative);
    CHECK(post[2].deriv_rod == 4);
    CHECK(post[2].cot_rod == 3);
    CHECK(post[2].prefactor == -0.5 * pre[0].prefactor);
    CHECK(post[2].coeff_label == pre[0].coeff_label + ">db");
    CHECK(post[2].op == pre[0].op);

    CHECK(post[3].radial == RadialKind::DiagCotCot);
    CHECK(post[3].deriv_rod == 0);
    CHECK(post[3].cot_rod == 0);
    CHECK(post[3].prefactor == 0.25 * pre[0].prefactor);
    CHECK(post[3].coeff_label == pre[0].coeff_label + ">diag");
    CHECK(post[3].op == pre[0].op);

    const struct {
        int kept;
        int parent;
        RadialKind child_kind;
        int child_cot;
    } first_rows[] = {
        {4, 1, RadialKind::DiagCotCot, 0},
        {6, 2, RadialKind::DiagCot, 3},
        {8, 3, RadialKind::DiagCotCot, 0},
        {10, 4, RadialKind::DiagCot, 4},
    };
    for (const auto &row : first_rows) {
        check_same_term(post[row.kept], pre[row.parent]);
        const auto &child = post[row.kept + 1];
        CHECK(child.radial == row.child_kind);
        CHECK(child.deriv_rod == 0);
        CHECK(child.cot_rod == row.child_cot);
        CHECK(child.prefactor == -0.5 * pre[row.parent].prefactor);
        CHECK(child.coeff_label == pre[row.parent].coeff_label + ">diag");
        CHECK(child.op == pre[row.parent].op);
    }

    for (int k = 5; k < 9; ++k) check_same_term(post[11 + k - 4], pre[k]);

    int first_count = 0, mixed_count = 0;
    for (const auto &t : post) {
        if (t.radial == RadialKind::MixedDerivative) ++mixed_count;
        if (t.radial == RadialKind::FirstDerivative) {
            ++first_count;
            CHECK(t.cot_rod != t.deriv_rod);
        }
    }
    CHECK(mixed_count == 1);
    CHECK(first_count == 6);
}

TEST_CASE("degenerate grids are rejected") {
    CHECK_THROWS_AS(second_derivative(RadialGrid{0}), InvalidQuery);
    CHECK_THROWS_AS(first_derivative(RadialGrid{0}), InvalidQuery);
}
