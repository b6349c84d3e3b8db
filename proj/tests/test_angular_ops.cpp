#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "smb/angular_ops.hpp"
#include "smb/coeffs.hpp"
#include "smb/oracle.hpp"
#include "smb/resources.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <set>
#include <vector>

using namespace smb;

namespace {

using cplx = std::complex<double>;

std::mt19937 rng_for(unsigned salt) { return std::mt19937(0x5eed2026u + salt); }

AngularState random_state(std::mt19937 &rng, int n_rods, int l_lo, int l_hi,
                          int n_slack) {
    std::uniform_int_distribution<int> dl(l_lo, l_hi);
    for (;;) {
        std::vector<RodLabels> rods;
        for (int k = 0; k < n_rods - 2; ++k) {
            const int l = dl(rng);
            std::uniform_int_distribution<int> dm(-l, l);
            rods.push_back({l, dm(rng)});
        }
        const int L = dl(rng);
        std::uniform_int_distribution<int> dM(-L, L);
        const int M = dM(rng), N = dM(rng);
        int sigma = N;
        for (const auto &r : rods) sigma += r.m;
        std::uniform_int_distribution<int> dn(0, n_slack);
        const int n = std::abs(sigma) + dn(rng);
        try {
            return make_state(n, rods, L, M, N);
        } catch (const InvalidQuantumNumber &) {
        }
    }
}

AngularState boxed_state(std::mt19937 &rng, int n_rods, int l_max,
                         int n_max) {
    for (;;) {
        const AngularState s = random_state(rng, n_rods, 0, l_max, 2);
        if (s.n <= n_max) return s;
    }
}

std::map<AngularState, cplx> as_map(const std::vector<Transition> &ts) {
    std::map<AngularState, cplx> m;
    for (const auto &t : ts) m[t.target] += t.amplitude;
    return m;
}

} // namespace

TEST_CASE("diagonal operators return their eigenvalues") {
    const AngularState s = make_state(2, {{2, 1}, {1, -1}}, 2, -1, 2);
    REQUIRE(s.sigma == 2);

    auto single = [](const std::vector<Transition> &ts) {
        REQUIRE(ts.size() == 1);
        return ts[0];
    };

    const Transition cas = single(apply({AngKind::RodCasimir, 3}, s));
    CHECK(cas.target == s);
    CHECK(cas.amplitude.real() == doctest::Approx(6.0));

    CHECK(single(apply({AngKind::RodCasimir, 4}, s)).amplitude.real() ==
          doctest::Approx(2.0));
    CHECK(single(apply({AngKind::RodLz, 3}, s)).amplitude.real() ==
          doctest::Approx(1.0));
    CHECK(single(apply({AngKind::InternalCasimir}, s)).amplitude.real() ==
          doctest::Approx(6.0));
    CHECK(single(apply({AngKind::SigmaLz}, s)).amplitude.real() ==
          doctest::Approx(-2.0));
    CHECK(single(apply({AngKind::TotalCasimir}, s)).amplitude.real() ==
          doctest::Approx(6.0));
    CHECK(single(apply({AngKind::BodyLz}, s)).amplitude.real() ==
          doctest::Approx(-2.0));
}

TEST_CASE("the sigma casimir vanishes identically on the all-zero state") {
    const AngularState zero = make_state(0, {{0, 0}}, 0, 0, 0);
    cplx diag = 0.0;
    for (const auto &t : apply({AngKind::SigmaCasimir}, zero))
        if (t.target == zero) diag += t.amplitude;
    CHECK(std::abs(diag) == 0.0);
}

TEST_CASE("the axis dot on a fresh rod is a single raising transition") {
    const AngularState ket = make_state(0, {{0, 0}}, 0, 0, 0);
    const auto ts = apply({AngKind::Rod1EtaEta, 3}, ket);
    REQUIRE(ts.size() == 1);
    CHECK(ts[0].target == make_state(0, {{1, 0}}, 0, 0, 0));
    CHECK(ts[0].amplitude.real() ==
          doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(ts[0].amplitude.imag() == 0.0);
    CHECK(ts[0].amplitude.real() ==
          doctest::Approx(ladder_coefficient(+1, 0, 0, 0)));
}

TEST_CASE("the rod2 axis dot splits into the three paired transitions") {
    const AngularState ket = make_state(0, {{0, 0}}, 0, 0, 0);
    const auto m = as_map(apply({AngKind::Rod2EtaEta, 3}, ket));
    REQUIRE(m.size() == 3);
    const cplx a0 = m.at(make_state(1, {{1, 0}}, 0, 0, 0));
    const cplx ap = m.at(make_state(1, {{1, 1}}, 0, 0, 0));
    const cplx am = m.at(make_state(1, {{1, -1}}, 0, 0, 0));
    CHECK(a0.real() == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(a0.imag() == doctest::Approx(0.0));
    CHECK(std::abs(ap) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(std::abs(am) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    for (const auto &[target, amp] : m) {
        const cplx oracle = quadrature_matrix_element(
            {AngKind::Rod2EtaEta, 3}, target, ket);
        CHECK(std::abs(oracle - amp) < 1e-10);
    }
}

TEST_CASE("loop-trace triples follow the oracle and kill repeated rods") {
    const AngularState ket = make_state(0, {{0, 0}}, 0, 0, 0);
    const AngularOperatorId op{AngKind::Triple12Mu, 3};
    const auto m = as_map(magnetic_angular(op, ket));
    REQUIRE(m.size() == 2);
    for (const auto &[target, amp] : m) {
        CHECK(target.n == 1);
        CHECK(target.rods[0].l == 1);
        CHECK(std::abs(target.rods[0].m) == 1);
        CHECK(std::abs(amp) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
        CHECK(amp.real() == doctest::Approx(0.0));
        const cplx oracle = quadrature_matrix_element(op, target, ket);
        CHECK(std::abs(oracle - amp) < 1e-10);
    }

    const AngularState four = make_state(0, {{1, 0}, {1, 0}}, 0, 0, 0);
    CHECK(magnetic_angular({AngKind::TripleMuNuLa, 3, 4, 3}, four).empty());
    CHECK(magnetic_angular({AngKind::Triple1MuNu, 4, 4}, four).empty());

    CHECK_THROWS_AS(magnetic_angular({AngKind::RodCasimir, 3}, ket),
                    OperatorUnavailable);
    CHECK_THROWS_AS(magnetic_angular({AngKind::Rod12BracketLambdaLambda}, ket),
                    OperatorUnavailable);
}

TEST_CASE("rod-indexed operators reject rod counts that lack the rod") {
    const AngularState two = make_state(1, {}, 1, 0, 1);
    CHECK_THROWS_AS(apply({AngKind::RodCasimir, 3}, two),
                    OperatorUnavailable);
    CHECK_THROWS_AS(apply({AngKind::Rod2EtaEta, 3}, two),
                    OperatorUnavailable);
    const AngularState three = make_state(0, {{0, 0}}, 0, 0, 0);
    CHECK_THROWS_AS(apply({AngKind::PairEtaEta, 3, 4}, three),
                    OperatorUnavailable);
    CHECK_THROWS_AS(apply({AngKind::PairEtaEta, 3, 3}, three),
                    OperatorUnavailable);
}

TEST_CASE("recursion amplitudes match the quadrature oracle catalog-wide") {
    auto rng = rng_for(101);
    for (int nr : {3, 4}) {
        for (const CatalogEntry &entry : catalog(nr)) {
            CAPTURE(std::string(entry.name));
            CAPTURE(nr);
            const double tol =
                is_multiplicative(entry.op.kind) ? 1e-10 : 1e-6;
            double worst = 0.0;
            double worst_absent = 0.0;
            for (int trial = 0; trial < 5; ++trial) {
                const AngularState ket = boxed_state(rng, nr, 2, 2);
                const auto trans = apply(entry.op, ket);
                for (const auto &tr : trans) {
                    const cplx q = quadrature_matrix_element(
                        entry.op, tr.target, ket);
                    worst = std::max(worst, std::abs(q - tr.amplitude));
                }
                for (int probe = 0; probe < 2; ++probe) {
                    const AngularState bra = boxed_state(rng, nr, 2, 2);
                    bool listed = false;
                    for (const auto &tr : trans)
                        listed = listed || tr.target == bra;
                    if (listed) continue;
                    const cplx q =
                        quadrature_matrix_element(entry.op, bra, ket);
                    worst_absent = std::max(worst_absent, std::abs(q));
                }
            }
            CHECK(worst < tol);
            CHECK(worst_absent < tol);
        }
    }
}

TEST_CASE("transitions stay local, conserve (L, M), and honor the sigma book") {
    auto rng = rng_for(211);
    for (int nr : {3, 4}) {
        for (const CatalogEntry &entry : catalog(nr)) {
            CAPTURE(std::string(entry.name));
            CAPTURE(nr);
            const Footprint fp = footprint(entry.op);
            CHECK(fp.max_rods_changed <= 3);
            std::set<int> observed;
            for (int trial = 0; trial < 400; ++trial) {
                const AngularState ket = random_state(rng, nr, 4, 6, 3);
                for (const auto &tr : apply(entry.op, ket)) {
                    CHECK(tr.target.L == ket.L);
                    CHECK(tr.target.M == ket.M);
                    CHECK(std::abs(tr.target.n - ket.n) <= 1);
                    CHECK(std::abs(tr.target.N - ket.N) <= 1);
                    int rods_changed = 0;
                    if (tr.target.n != ket.n) ++rods_changed;
                    if (tr.target.N != ket.N) ++rods_changed;
                    for (std::size_t k = 0; k < ket.rods.size(); ++k) {
                        const int dl =
                            tr.target.rods[k].l - ket.rods[k].l;
                        const int dm =
                            tr.target.rods[k].m - ket.rods[k].m;
                        CHECK(std::abs(dl) <= 1);
                        CHECK(std::abs(dm) <= 1);
                        if (dl || dm) ++rods_changed;
                    }
                    CHECK(rods_changed <= 3);
                    const int dsig = tr.target.recompute_sigma() -
                                     ket.recompute_sigma();
                    observed.insert(dsig);
                    CHECK(fp.sigma_deltas.count(dsig) == 1);
                }
            }
            CHECK(observed == fp.sigma_deltas);
        }
    }
}

TEST_CASE("the momentum dot on rod 1 equals its total-momentum decomposition") {
    auto rng = rng_for(307);
    for (int nr : {3, 4}) {
        for (int trial = 0; trial < 40; ++trial) {
            const AngularState ket = random_state(rng, nr, 2, 5, 3);
            auto direct = as_map(apply({AngKind::Rod1LambdaLambda, 3}, ket));
            std::map<AngularState, cplx> built =
                as_map(apply({AngKind::Rod1LambdaMuLPrime, 3}, ket));
            built[ket] -= casimir(ket.rods[0].l);
            for (const auto &[st, amp] :
                 as_map(apply({AngKind::Rod2LambdaLambda, 3}, ket)))
                built[st] -= amp;
            for (int nu = 4; nu <= nr; ++nu)
                for (const auto &[st, amp] :
                     as_map(apply({AngKind::PairLambdaLambda, 3, nu}, ket)))
                    built[st] -= amp;
            for (const auto &[st, amp] : built) {
                const auto it = direct.find(st);
                const cplx want = it == direct.end() ? cplx{0.0} : it->second;
                CHECK(std::abs(amp - want) < 1e-12);
            }
            for (const auto &[st, amp] : direct) {
                const auto it = built.find(st);
                const cplx got = it == built.end() ? cplx{0.0} : it->second;
                CHECK(std::abs(amp - got) < 1e-12);
            }
        }
    }
}

TEST_CASE("single-rod bilinears reduce to their three-term closed forms") {
    const auto mu = bilinear_terms(3, 3, Side::L, Side::L, 4);
    REQUIRE(mu.size() == 3);
    CHECK(mu[0].radial == RadialKind::SecondDerivative);
    CHECK(mu[0].deriv_rod == 3);
    CHECK(mu[0].prefactor == cplx(-1.0, 0.0));
    CHECK(mu[1].radial == RadialKind::FirstDerivative);
    CHECK(mu[1].deriv_rod == 3);
    CHECK(mu[1].cot_rod == 3);
    CHECK(mu[1].prefactor == cplx(-1.0, 0.0));
    CHECK(mu[2].radial == RadialKind::DiagGamma);
    CHECK(mu[2].op.kind == AngKind::RodCasimir);
    CHECK(mu[2].op.mu == 3);

    const auto rod2 = bilinear_terms(2, 2, Side::R, Side::L, 4);
    REQUIRE(rod2.size() == 3);
    CHECK(rod2[2].radial == RadialKind::DiagGamma);
    CHECK(rod2[2].op.kind == AngKind::InternalCasimir);

    const auto rod1 = bilinear_terms(1, 1, Side::L, Side::L, 4);
    REQUIRE(rod1.size() == 5);
    std::map<AngKind, cplx> gammas;
    for (std::size_t k = 2; k < rod1.size(); ++k) {
        CHECK(rod1[k].radial == RadialKind::DiagGamma);
        gammas[rod1[k].op.kind] = rod1[k].prefactor;
    }
    CHECK(gammas.at(AngKind::SigmaCasimir) == cplx(1.0, 0.0));
    CHECK(gammas.at(AngKind::InternalCasimir) == cplx(1.0, 0.0));
    CHECK(gammas.at(AngKind::SigmaDotLambda2) == cplx(-2.0, 0.0));

    const auto lone = bilinear_terms(1, 1, Side::L, Side::L, 1);
    REQUIRE(lone.size() == 3);
    CHECK(lone[2].op.kind == AngKind::TotalCasimir);

    CHECK_THROWS_AS(bilinear_terms(0, 1, Side::L, Side::L, 4), InvalidQuery);
    CHECK_THROWS_AS(bilinear_terms(1, 5, Side::L, Side::L, 4), InvalidQuery);
}

TEST_CASE("two-rod bilinears expand into the nine printed structures") {
    const auto ll = bilinear_terms(3, 4, Side::L, Side::L, 4);
    REQUIRE(ll.size() == 9);
    CHECK(ll[0].radial == RadialKind::MixedDerivative);
    CHECK(ll[0].op.kind == AngKind::PairEtaEta);
    CHECK(ll[0].prefactor == cplx(-1.0, 0.0));
    int first_deriv = 0, diag_cot = 0;
    for (const auto &t : ll) {
        if (t.radial == RadialKind::FirstDerivative) ++first_deriv;
        if (t.radial == RadialKind::DiagCot) ++diag_cot;
    }
    CHECK(first_deriv == 4);
    CHECK(diag_cot == 2);
    CHECK(ll[5].radial == RadialKind::DiagCotCot);
    CHECK(std::abs(ll[5].prefactor - cplx(0.25, 0.0)) == 0.0);
    CHECK(ll[8].radial == RadialKind::DiagOne);
    CHECK(ll[8].op.kind == AngKind::PairLambdaLambda);

    const auto lr = bilinear_terms(3, 4, Side::L, Side::R, 4);
    REQUIRE(lr.size() == 9);
    for (std::size_t k = 0; k < 9; ++k) {
        CHECK(ll[k].radial == lr[k].radial);
        CHECK(ll[k].op.kind == lr[k].op.kind);
        CHECK(std::abs(ll[k].prefactor) ==
              doctest::Approx(std::abs(lr[k].prefactor)));
    }
    CHECK(ll[2].prefactor == -lr[2].prefactor);
    CHECK(ll[6].prefactor == -lr[6].prefactor);
    CHECK(ll[8].prefactor == -lr[8].prefactor);
    CHECK(ll[1].prefactor == lr[1].prefactor);
    CHECK(ll[3].prefactor == lr[3].prefactor);
    CHECK(ll[4].prefactor == lr[4].prefactor);
    CHECK(ll[7].prefactor == lr[7].prefactor);

    const auto swapped = bilinear_terms(4, 3, Side::R, Side::L, 4);
    const auto canonical = bilinear_terms(3, 4, Side::L, Side::R, 4);
    REQUIRE(swapped.size() == canonical.size());
    for (std::size_t k = 0; k < swapped.size(); ++k) {
        CHECK(swapped[k].radial == canonical[k].radial);
        CHECK(swapped[k].op == canonical[k].op);
        CHECK(swapped[k].prefactor == canonical[k].prefactor);
    }

    const auto r12 = bilinear_terms(1, 2, Side::L, Side::L, 4);
    REQUIRE(r12.size() == 9);
    CHECK(r12[0].op.kind == AngKind::Rod12EtaEta);
    CHECK(r12[5].op.kind == AngKind::Rod12BracketCrossCross);
    CHECK(r12[8].op.kind == AngKind::Rod12BracketLambdaLambda);

    const auto r1mu = bilinear_terms(1, 3, Side::L, Side::L, 4);
    REQUIRE(r1mu.size() == 9);
    CHECK(r1mu[8].op.kind == AngKind::Rod1LambdaLambda);
}

TEST_CASE("term-class counts reproduce the tabulated totals") {
    CHECK(term_class_count(BilinearClass::Rod1Rod1, 4) == 13);
    CHECK(term_class_count(BilinearClass::Rod2Rod2, 4) == 1);
    CHECK(term_class_count(BilinearClass::MuMu, 4) == 1);
    CHECK(term_class_count(BilinearClass::Rod1Rod2, 4) == 21);
    CHECK(term_class_count(BilinearClass::Rod1Mu, 4) == 21);
    CHECK(term_class_count(BilinearClass::Rod2Mu, 4) == 27);
    CHECK(term_class_count(BilinearClass::MuNu, 4) == 27);

    for (int nr = 2; nr <= 9; ++nr) {
        CHECK(term_class_count(BilinearClass::Rod1Rod1, nr) ==
              nr * (nr - 1) + 1);
        CHECK(term_class_count(BilinearClass::Rod2Rod2, nr) == 1);
        CHECK(term_class_count(BilinearClass::Rod1Rod2, nr) ==
              3 * (2 * nr - 1));
        if (nr >= 3) {
            CHECK(term_class_count(BilinearClass::MuMu, nr) == 1);
            CHECK(term_class_count(BilinearClass::Rod1Mu, nr) ==
                  3 * (2 * nr - 1));
            CHECK(term_class_count(BilinearClass::Rod2Mu, nr) == 27);
        }
        if (nr >= 4)
            CHECK(term_class_count(BilinearClass::MuNu, nr) == 27);
        if (nr >= 4) {
            for (BilinearClass c :
                 {BilinearClass::Rod1Rod1, BilinearClass::Rod2Rod2,
                  BilinearClass::MuMu, BilinearClass::Rod1Rod2,
                  BilinearClass::Rod1Mu, BilinearClass::Rod2Mu,
                  BilinearClass::MuNu})
                CHECK(term_class_count(c, nr) == count_terms(nr, c));
        }
    }
    CHECK_THROWS_AS(term_class_count(BilinearClass::MuMu, 2), InvalidQuery);
    CHECK_THROWS_AS(term_class_count(BilinearClass::MuNu, 3), InvalidQuery);
}

TEST_CASE("classify_bilinear routes every rod pairing to its class") {
    CHECK(classify_bilinear(1, 1) == BilinearClass::Rod1Rod1);
    CHECK(classify_bilinear(2, 2) == BilinearClass::Rod2Rod2);
    CHECK(classify_bilinear(5, 5) == BilinearClass::MuMu);
    CHECK(classify_bilinear(1, 2) == BilinearClass::Rod1Rod2);
    CHECK(classify_bilinear(2, 1) == BilinearClass::Rod1Rod2);
    CHECK(classify_bilinear(1, 4) == BilinearClass::Rod1Mu);
    CHECK(classify_bilinear(3, 2) == BilinearClass::Rod2Mu);
    CHECK(classify_bilinear(4, 3) == BilinearClass::MuNu);
}

TEST_CASE("the exported catalog instantiates every kind exactly once") {
    for (int nr : {3, 4, 5}) {
        const auto cat = catalog(nr);
        std::set<AngKind> kinds;
        for (const auto &e : cat) {
            CHECK(kinds.insert(e.op.kind).second);
            CHECK(e.name != nullptr);
            if (e.op.mu) CHECK(e.op.mu <= nr);
            if (e.op.nu) CHECK(e.op.nu <= nr);
            if (e.op.la) CHECK(e.op.la <= nr);
        }
        CHECK(kinds.count(AngKind::Identity) == 1);
        CHECK(kinds.count(AngKind::Rod12BracketLambdaLambda) == 1);
        if (nr >= 4) {
            CHECK(kinds.count(AngKind::PairLambdaLambda) == 1);
            CHECK(kinds.count(AngKind::Triple1MuNu) == 1);
        }
        if (nr >= 5) CHECK(kinds.count(AngKind::TripleMuNuLa) == 1);
    }
    const auto small = catalog(2);
    for (const auto &e : small) {
        CHECK(e.op.mu == 0);
        CHECK(e.op.nu == 0);
    }
}
