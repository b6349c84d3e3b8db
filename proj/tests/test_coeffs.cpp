#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "smb/coeffs.hpp"
#include "smb/errors.hpp"
#include "smb/oracle.hpp"

using namespace smb;

namespace {

// Overlap of two normalized associated Legendre functions against a polar
// weight, integrated over cos(theta).
double polar_overlap(int lb, int mb, int lk, int mk,
                     double (*weight)(double)) {
    std::vector<double> x, w;
    gauss_legendre(96, x, w);
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        acc += w[i] * alp_normalized(lb, mb, x[i]) * weight(x[i]) *
               alp_normalized(lk, mk, x[i]);
    return acc;
}

double weight_cos(double x) { return x; }
double weight_sin(double x) { return std::sqrt(1.0 - x * x); }

} // namespace

TEST_CASE("ladder coefficient closed forms at small labels") {
    CHECK(ladder_coefficient(0, +1, 1, 0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(ladder_coefficient(0, +1, 1, 1) == 0.0);
    CHECK(ladder_coefficient(+1, 0, 0, 0) ==
          doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(ladder_coefficient(0, 0, 3, -2) == doctest::Approx(-2.0));
    CHECK(ladder_coefficient(-1, 0, 1, 0) ==
          doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("ladder coefficients vanish outside the allowed range") {
    CHECK(ladder_coefficient(-1, 0, 0, 0) == 0.0);
    CHECK(ladder_coefficient(-1, -1, 1, -1) == 0.0);
    CHECK(ladder_coefficient(0, +1, 2, 2) == 0.0);
    CHECK(ladder_coefficient(0, -1, 2, -2) == 0.0);
    CHECK(ladder_coefficient(+1, 0, 2, 5) == 0.0);
    CHECK(ladder_coefficient(0, 0, 1, 3) == 0.0);
}

TEST_CASE("undefined shifts are rejected") {
    CHECK_THROWS_AS(ladder_coefficient(2, 0, 1, 0), InvalidLadder);
    CHECK_THROWS_AS(ladder_coefficient(0, -2, 1, 0), InvalidLadder);
    CHECK_THROWS_AS(ladder_coefficient(-2, 1, 4, 2), InvalidLadder);
}

TEST_CASE("projection ladder symmetry") {
    for (int l = 0; l <= 40; ++l)
        for (int m = -l - 1; m <= l + 1; ++m)
            CHECK(ladder_coefficient(0, +1, l, m) ==
                  doctest::Approx(ladder_coefficient(0, -1, l, m + 1))
                      .epsilon(1e-13));
}

TEST_CASE("directional coefficients are finite and non-negative in range") {
    const int dirs[8][2] = {{0, 1},  {0, -1}, {1, 0},  {-1, 0},
                            {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};
    for (int l = 0; l <= 20; ++l)
        for (int m = -l; m <= l; ++m)
            for (const auto &d : dirs) {
                const double v = ladder_coefficient(d[0], d[1], l, m);
                CHECK(std::isfinite(v));
                CHECK(v >= 0.0);
            }
}

TEST_CASE("memoized region matches the closed form") {
    for (int l = 63; l <= 66; ++l)
        for (int m : {-l, -1, 0, 1, l}) {
            const double a = ladder_coefficient(+1, +1, l, m);
            const double b = ladder_coefficient(+1, +1, l, m);
            CHECK(a == b);
            CHECK(std::isfinite(a));
        }
    const double big = ladder_coefficient(0, 0, 100, -37);
    CHECK(big == doctest::Approx(-37.0));
}

TEST_CASE("casimir values and domain") {
    CHECK(casimir(0) == 0.0);
    CHECK(casimir(2) == 6.0);
    CHECK(casimir(5) == 30.0);
    CHECK_THROWS_AS(casimir(-1), InvalidQuantumNumber);
}

TEST_CASE("gamma factor values") {
    const double pi = std::acos(-1.0);
    CHECK(gamma_factor(Side::L, Side::L, pi) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(gamma_factor(Side::R, Side::R, pi) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(gamma_factor(Side::R, Side::L, pi) == doctest::Approx(-0.25).epsilon(1e-14));
    CHECK(gamma_factor(Side::L, Side::R, pi / 2) ==
          doctest::Approx(0.0).epsilon(1e-14));
    CHECK_THROWS_AS(gamma_factor(Side::L, Side::L, 0.0), RadialSingularity);
    CHECK_THROWS_AS(gamma_factor(Side::L, Side::R, 2 * pi), RadialSingularity);
}

TEST_CASE("side signs") {
    CHECK(delta_sign(Side::L) == +1);
    CHECK(delta_sign(Side::R) == -1);
    CHECK(delta_sign(Side::L) * delta_sign(Side::R) == -1);
}

TEST_CASE("label shifts reproduce polar overlap integrals") {
    for (int l = 0; l <= 3; ++l)
        for (int m = -l; m <= l; ++m) {
            const double up = polar_overlap(l + 1, m, l, m, weight_cos);
            CHECK(std::abs(up - ladder_coefficient(+1, 0, l, m)) < 1e-10);
            if (l >= 1 && std::abs(m) <= l - 1) {
                const double down = polar_overlap(l - 1, m, l, m, weight_cos);
                CHECK(std::abs(down - ladder_coefficient(-1, 0, l, m)) < 1e-10);
            }
            const double upp = polar_overlap(l + 1, m + 1, l, m, weight_sin);
            CHECK(std::abs(std::abs(upp) - ladder_coefficient(+1, +1, l, m)) <
                  1e-10);
            const double upm = polar_overlap(l + 1, m - 1, l, m, weight_sin);
            CHECK(std::abs(std::abs(upm) - ladder_coefficient(+1, -1, l, m)) <
                  1e-10);
            if (l >= 1 && std::abs(m + 1) <= l - 1) {
                const double dpp = polar_overlap(l - 1, m + 1, l, m, weight_sin);
                CHECK(std::abs(std::abs(dpp) -
                               ladder_coefficient(-1, +1, l, m)) < 1e-10);
            }
        }
}

TEST_CASE("projection shift squares close the casimir identity") {
    for (int l = 0; l <= 12; ++l)
        for (int m = -l; m <= l; ++m) {
            const double up = ladder_coefficient(0, +1, l, m);
            const double dn = ladder_coefficient(0, -1, l, m);
            CHECK(up * up + dn * dn + 2.0 * m * m ==
                  doctest::Approx(2.0 * casimir(l)).epsilon(1e-12));
        }
}
