#include "smb/angular_ops.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

namespace smb {

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};

double C(int dl, int dm, int l, int m) {
    return ladder_coefficient(dl, dm, l, m);
}

AngularState finalize(AngularState s) {
    s.sigma = s.recompute_sigma();
    return s;
}

int n_rods_of(const AngularState &s) {
    return 2 + static_cast<int>(s.rods.size());
}

// Amplitude accumulator keyed by target; duplicate targets merge by addition,
// zero amplitudes and invalid targets never enter.
class Acc {
  public:
    explicit Acc(const AngularState &src) : src_(src) {}

    void add(AngularState target, cplx amp) {
        if (amp == cplx{0.0, 0.0}) return;
        target = finalize(target);
        if (!target.valid()) return;
        amps_[target] += amp;
    }

    // Convenience label edits relative to the source state.
    AngularState base() const { return src_; }

    std::vector<Transition> take() {
        double peak = 0.0;
        for (auto &[st, a] : amps_) peak = std::max(peak, std::abs(a));
        std::vector<Transition> out;
        for (auto &[st, a] : amps_) {
            if (std::abs(a) <= 1e-15 * peak) continue;
            out.push_back({st, a});
        }
        return out;
    }

  private:
    AngularState src_;
    std::map<AngularState, cplx> amps_;
};

AngularState with_n(AngularState s, int dn) {
    s.n += dn;
    return s;
}
AngularState with_N(AngularState s, int dN) {
    s.N += dN;
    return s;
}
AngularState with_lm(AngularState s, int mu, int dl, int dm) {
    s.rods[mu - 3].l += dl;
    s.rods[mu - 3].m += dm;
    return s;
}

void require_rod(const AngularState &s, int mu) {
    if (mu < 3 || mu > n_rods_of(s))
        throw OperatorUnavailable("rod index " + std::to_string(mu) +
                                  " outside [3," +
                                  std::to_string(n_rods_of(s)) + "]");
}

void require_distinct(int a, int b) {
    if (a == b)
        throw OperatorUnavailable("pair operator needs two distinct rods");
}

// ---------------------------------------------------------------------------
// Diagonal family.

void diag_sigma_casimir(Acc &acc, const AngularState &s) {
    const int nr = n_rods_of(s);
    double diag = casimir(s.L);
    for (const auto &r : s.rods) diag += casimir(r.l);
    acc.add(s, diag);
    for (int mu = 3; mu <= nr; ++mu) {
        const auto [lm, mm] = std::pair(s.rods[mu - 3].l, s.rods[mu - 3].m);
        for (int nu = mu + 1; nu <= nr; ++nu) {
            const auto [ln, mn] = std::pair(s.rods[nu - 3].l, s.rods[nu - 3].m);
            for (int dm : {+1, -1}) {
                acc.add(s, C(0, 0, lm, mm) * C(0, 0, ln, mn));
                acc.add(with_lm(with_lm(s, mu, 0, dm), nu, 0, -dm),
                        C(0, dm, lm, mm) * C(0, -dm, ln, mn));
            }
        }
        for (int dm : {+1, -1}) {
            acc.add(s, C(0, 0, s.L, s.N) * C(0, 0, lm, mm));
            acc.add(with_lm(with_N(s, dm), mu, 0, -dm),
                    C(0, dm, s.L, s.N) * C(0, -dm, lm, mm));
        }
    }
}

void diag_sigma_dot_lambda2(Acc &acc, const AngularState &s) {
    const int nr = n_rods_of(s);
    const int n = s.n, sg = s.sigma;
    for (int mu = 3; mu <= nr; ++mu) {
        const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
        for (int dm : {+1, -1}) {
            acc.add(s, 0.5 * C(0, 0, n, sg) * C(0, 0, lm, mm));
            acc.add(with_lm(s, mu, 0, dm),
                    0.5 * C(0, dm, n, sg) * C(0, dm, lm, mm));
        }
    }
    for (int dm : {+1, -1}) {
        acc.add(s, 0.5 * C(0, 0, n, sg) * C(0, 0, s.L, s.N));
        acc.add(with_N(s, dm), 0.5 * C(0, dm, n, sg) * C(0, dm, s.L, s.N));
    }
}

// ---------------------------------------------------------------------------
// Two ordinary rods.

void pair_eta_eta(Acc &acc, const AngularState &s, int mu, int nu) {
    const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
    const int ln = s.rods[nu - 3].l, mn = s.rods[nu - 3].m;
    for (int dlm : {+1, -1})
        for (int dln : {+1, -1})
            for (int dm : {+1, -1}) {
                acc.add(with_lm(with_lm(s, mu, dlm, 0), nu, dln, 0),
                        0.5 * C(dlm, 0, lm, mm) * C(dln, 0, ln, mn));
                acc.add(with_lm(with_lm(s, mu, dlm, dm), nu, dln, -dm),
                        -0.5 * dlm * dln * C(dlm, dm, lm, mm) *
                            C(dln, -dm, ln, mn));
            }
}

void pair_eta_cross(Acc &acc, const AngularState &s, int mu, int nu) {
    const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
    const int ln = s.rods[nu - 3].l, mn = s.rods[nu - 3].m;
    for (int dlm : {+1, -1})
        for (int dln : {+1, -1})
            for (int dm : {+1, -1}) {
                acc.add(with_lm(with_lm(s, mu, dlm, 0), nu, dln, 0),
                        (-kI / 2.0) * double(dln) * C(dlm, 0, lm, mm) *
                            C(dln, -dm, ln, mn + dm) * C(0, dm, ln, mn));
                acc.add(
                    with_lm(with_lm(s, mu, dlm, -dm), nu, dln, dm),
                    (kI / 2.0) * double(dlm) * C(dlm, -dm, lm, mm) *
                        (C(dln, 0, ln, mn + dm) * C(0, dm, ln, mn) +
                         dln * dm * C(dln, dm, ln, mn) * C(0, 0, ln, mn)));
            }
}

void pair_cross_cross(Acc &acc, const AngularState &s, int mu, int nu) {
    const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
    const int ln = s.rods[nu - 3].l, mn = s.rods[nu - 3].m;
    for (int dlm : {+1, -1})
        for (int dln : {+1, -1})
            for (int dm : {+1, -1}) {
                const double symm_mu =
                    C(dlm, dm, lm, mm - dm) * C(0, -dm, lm, mm) +
                    C(dlm, -dm, lm, mm + dm) * C(0, dm, lm, mm);
                const double symm_nu =
                    C(dln, dm, ln, mn - dm) * C(0, -dm, ln, mn) +
                    C(dln, -dm, ln, mn + dm) * C(0, dm, ln, mn);
                acc.add(with_lm(with_lm(s, mu, dlm, 0), nu, dln, 0),
                        -0.5 * (dlm * dln / 4.0) * symm_mu * symm_nu);
                const double asym_mu =
                    C(dlm, 0, lm, mm + dm) * C(0, dm, lm, mm) +
                    dm * dlm * C(dlm, dm, lm, mm) * C(0, 0, lm, mm);
                const double asym_nu =
                    C(dln, 0, ln, mn - dm) * C(0, -dm, ln, mn) -
                    dm * dln * C(dln, -dm, ln, mn) * C(0, 0, ln, mn);
                acc.add(with_lm(with_lm(s, mu, dlm, dm), nu, dln, -dm),
                        0.5 * asym_mu * asym_nu);
            }
}

void pair_eta_lambda(Acc &acc, const AngularState &s, int mu, int nu) {
    const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
    const int ln = s.rods[nu - 3].l, mn = s.rods[nu - 3].m;
    for (int dl : {+1, -1})
        for (int dm : {+1, -1}) {
            acc.add(with_lm(with_lm(s, mu, dl, -dm), nu, 0, dm),
                    0.5 * dl * dm * C(dl, -dm, lm, mm) * C(0, dm, ln, mn));
            acc.add(with_lm(s, mu, dl, 0),
                    0.5 * C(dl, 0, lm, mm) * C(0, 0, ln, mn));
        }
}

void pair_lambda_cross(Acc &acc, const AngularState &s, int mu, int nu) {
    const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
    const int ln = s.rods[nu - 3].l, mn = s.rods[nu - 3].m;
    for (int dln : {+1, -1})
        for (int dm : {+1, -1}) {
            acc.add(with_lm(s, nu, dln, 0),
                    (-kI / 2.0) * double(dln) * C(0, 0, lm, mm) *
                        C(dln, -dm, ln, mn + dm) * C(0, dm, ln, mn));
            acc.add(with_lm(with_lm(s, mu, 0, -dm), nu, dln, dm),
                    (kI / 2.0) * C(0, -dm, lm, mm) *
                        (dm * C(dln, 0, ln, mn + dm) * C(0, dm, ln, mn) +
                         dln * C(dln, dm, ln, mn) * C(0, 0, ln, mn)));
        }
}

void pair_lambda_lambda(Acc &acc, const AngularState &s, int mu, int nu) {
    const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
    const int ln = s.rods[nu - 3].l, mn = s.rods[nu - 3].m;
    for (int dm : {+1, -1}) {
        acc.add(with_lm(with_lm(s, mu, 0, dm), nu, 0, -dm),
                0.5 * C(0, dm, lm, mm) * C(0, -dm, ln, mn));
        acc.add(s, 0.5 * C(0, 0, lm, mm) * C(0, 0, ln, mn));
    }
}

// ---------------------------------------------------------------------------
// Rod 2 with an ordinary rod.

void rod2_eta_eta(Acc &acc, const AngularState &s, int mu) {
    const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
    const int n = s.n, sg = s.sigma;
    for (int dn : {+1, -1})
        for (int dl : {+1, -1})
            for (int dm : {+1, -1}) {
                acc.add(with_lm(with_n(s, dn), mu, dl, 0),
                        0.5 * C(dn, 0, n, sg) * C(dl, 0, lm, mm));
                acc.add(with_lm(with_n(s, dn), mu, dl, dm),
                        0.5 * dn * dl * C(dn, dm, n, sg) * C(dl, dm, lm, mm));
            }
}

void rod2_eta_cross_mu(Acc &acc, const AngularState &s, int mu) {
    const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
    const int n = s.n, sg = s.sigma;
    for (int dn : {+1, -1})
        for (int dl : {+1, -1})
            for (int dm : {+1, -1}) {
                acc.add(with_lm(with_n(s, dn), mu, dl, dm),
                        (-kI / 2.0) * double(dn) * C(dn, dm, n, sg) *
                            (C(dl, 0, lm, mm + dm) * C(0, dm, lm, mm) +
                             dm * dl * C(dl, dm, lm, mm) * C(0, 0, lm, mm)));
                acc.add(with_lm(with_n(s, dn), mu, dl, 0),
                        (-kI / 2.0) * double(dl) * C(dn, 0, n, sg) *
                            C(dl, dm, lm, mm - dm) * C(0, -dm, lm, mm));
            }
}

void rod2_eta_mu_cross2(Acc &acc, const AngularState &s, int mu) {
    const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
    const int n = s.n, sg = s.sigma;
    for (int dn : {+1, -1})
        for (int dl : {+1, -1})
            for (int dm : {+1, -1}) {
                acc.add(with_lm(with_n(s, dn), mu, dl, 0),
                        (-kI / 2.0) * (dn / 2.0) *
                            (C(dn, -dm, n, sg + dm) * C(0, dm, n, sg) +
                             C(dn, dm, n, sg - dm) * C(0, -dm, n, sg)) *
                            C(dl, 0, lm, mm));
                acc.add(with_lm(with_n(s, dn), mu, dl, dm),
                        (-kI / 2.0) * double(dl) *
                            (C(dn, 0, n, sg + dm) * C(0, dm, n, sg) +
                             dn * dm * C(dn, dm, n, sg) * C(0, 0, n, sg)) *
                            C(dl, dm, lm, mm));
            }
}

void rod2_cross_cross(Acc &acc, const AngularState &s, int mu) {
    const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
    const int n = s.n, sg = s.sigma;
    for (int dn : {+1, -1})
        for (int dl : {+1, -1})
            for (int dm : {+1, -1}) {
                const double symm_n =
                    C(dn, dm, n, sg - dm) * C(0, -dm, n, sg) +
                    C(dn, -dm, n, sg + dm) * C(0, dm, n, sg);
                const double symm_l =
                    C(dl, dm, lm, mm - dm) * C(0, -dm, lm, mm) +
                    C(dl, -dm, lm, mm + dm) * C(0, dm, lm, mm);
                acc.add(with_lm(with_n(s, dn), mu, dl, 0),
                        -0.5 * (dn * dl / 4.0) * symm_n * symm_l);
                const double asym_n =
                    C(dn, 0, n, sg + dm) * C(0, dm, n, sg) +
                    dm * dn * C(dn, dm, n, sg) * C(0, 0, n, sg);
                const double asym_l =
                    C(dl, 0, lm, mm + dm) * C(0, dm, lm, mm) +
                    dm * dl * C(dl, dm, lm, mm) * C(0, 0, lm, mm);
                acc.add(with_lm(with_n(s, dn), mu, dl, dm),
                        -0.5 * asym_n * asym_l);
            }
}

void rod2_cross_mu_lambda2(Acc &acc, const AngularState &s, int mu) {
    const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
    const int n = s.n, sg = s.sigma;
    for (int dl : {+1, -1})
        for (int dm : {+1, -1}) {
            acc.add(with_lm(s, mu, dl, 0),
                    (kI / 2.0) * double(dl) * C(0, 0, n, sg) *
                        C(dl, -dm, lm, mm + dm) * C(0, dm, lm, mm));
            acc.add(with_lm(s, mu, dl, dm),
                    (-kI / 2.0) * double(dl) * C(0, dm, n, sg) *
                        (dm * dl * C(dl, 0, lm, mm + dm) * C(0, dm, lm, mm) +
                         C(dl, dm, lm, mm) * C(0, 0, lm, mm)));
        }
}

void rod2_eta_lambda_mu(Acc &acc, const AngularState &s, int mu) {
    const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
    const int n = s.n, sg = s.sigma;
    for (int dn : {+1, -1})
        for (int dm : {+1, -1}) {
            acc.add(with_n(s, dn),
                    0.5 * C(dn, 0, n, sg) * C(0, 0, lm, mm));
            acc.add(with_lm(with_n(s, dn), mu, 0, dm),
                    -0.5 * dn * dm * C(dn, dm, n, sg) * C(0, dm, lm, mm));
        }
}

void rod2_lambda_mu_cross2(Acc &acc, const AngularState &s, int mu) {
    const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
    const int n = s.n, sg = s.sigma;
    for (int dn : {+1, -1})
        for (int dm : {+1, -1}) {
            acc.add(with_lm(with_n(s, dn), mu, 0, dm),
                    (kI / 2.0) * double(dn) * C(0, dm, lm, mm) *
                        (dm * dn * C(dn, 0, n, sg + dm) * C(0, dm, n, sg) +
                         C(dn, dm, n, sg) * C(0, 0, n, sg)));
            acc.add(with_n(s, dn),
                    (-kI / 2.0) * double(dn) * C(0, 0, lm, mm) *
                        C(dn, -dm, n, sg + dm) * C(0, dm, n, sg));
        }
}

void rod2_eta_mu_lambda2(Acc &acc, const AngularState &s, int mu) {
    const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
    const int n = s.n, sg = s.sigma;
    for (int dl : {+1, -1})
        for (int dm : {+1, -1}) {
            acc.add(with_lm(s, mu, dl, 0),
                    -0.5 * C(0, 0, n, sg) * C(dl, 0, lm, mm));
            acc.add(with_lm(s, mu, dl, dm),
                    0.5 * dl * dm * C(0, dm, n, sg) * C(dl, dm, lm, mm));
        }
}

void rod2_lambda_lambda(Acc &acc, const AngularState &s, int mu) {
    const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
    const int n = s.n, sg = s.sigma;
    for (int dm : {+1, -1}) {
        acc.add(s, -0.5 * C(0, 0, n, sg) * C(0, 0, lm, mm));
        acc.add(with_lm(s, mu, 0, dm),
                -0.5 * C(0, dm, n, sg) * C(0, dm, lm, mm));
    }
}

// ---------------------------------------------------------------------------
// Rod 1 with an ordinary rod. The three-way brace shared by several entries:
// a compensating shift of -dm placed on N, on another rod, or on nothing
// (changing sigma through the polar tower instead).
template <typename F>
void for_brace(const AngularState &s, int mu, int dm, F &&emit) {
    emit(with_N(s, -dm), C(0, -dm, s.L, s.N));
    const int nr = n_rods_of(s);
    for (int nu = 3; nu <= nr; ++nu) {
        if (nu == mu) continue;
        emit(with_lm(s, nu, 0, -dm),
             C(0, -dm, s.rods[nu - 3].l, s.rods[nu - 3].m));
    }
    emit(s, -C(0, dm, s.n, s.sigma));
}

void rod1_eta_eta(Acc &acc, const AngularState &s, int mu) {
    const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
    for (int dl : {+1, -1}) acc.add(with_lm(s, mu, dl, 0), C(dl, 0, lm, mm));
}

void rod1_eta_cross_mu(Acc &acc, const AngularState &s, int mu) {
    const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
    for (int dl : {+1, -1})
        for (int dm : {+1, -1})
            acc.add(with_lm(s, mu, dl, 0),
                    (-kI / 2.0) * double(dl) * C(dl, -dm, lm, mm + dm) *
                        C(0, dm, lm, mm));
}

void rod1_eta_mu_cross1(Acc &acc, const AngularState &s, int mu) {
    const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
    for (int dl : {+1, -1})
        for (int dm : {+1, -1}) {
            acc.add(with_lm(s, mu, dl, 0),
                    (-kI / 2.0) * double(dl) * C(dl, -dm, lm, mm + dm) *
                        C(0, dm, lm, mm));
            const cplx outer = (-kI / 2.0) * double(dl) * C(dl, dm, lm, mm);
            for_brace(s, mu, dm, [&](const AngularState &t, double b) {
                acc.add(with_lm(t, mu, dl, dm), outer * b);
            });
        }
}

void rod1_eta_mu_lambda1(Acc &acc, const AngularState &s, int mu) {
    const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
    for (int dl : {+1, -1})
        for (int dm : {+1, -1}) {
            acc.add(with_lm(s, mu, dl, 0),
                    0.5 * C(dl, 0, lm, mm) * C(0, 0, lm, mm));
            const cplx outer = 0.5 * dl * dm * C(dl, dm, lm, mm);
            for_brace(s, mu, dm, [&](const AngularState &t, double b) {
                acc.add(with_lm(t, mu, dl, dm), outer * b);
            });
        }
}

void rod1_cross_cross(Acc &acc, const AngularState &s, int mu) {
    const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
    for (int dl : {+1, -1})
        for (int dm : {+1, -1}) {
            acc.add(with_lm(s, mu, dl, 0),
                    -0.5 * (casimir(lm) * C(dl, 0, lm, mm) -
                            dl * C(dl, dm, lm, mm - dm) * C(0, -dm, lm, mm)));
            const cplx outer =
                -0.5 * (C(dl, 0, lm, mm + dm) * C(0, dm, lm, mm) +
                        dl * dm * C(dl, dm, lm, mm) * C(0, 0, lm, mm));
            for_brace(s, mu, dm, [&](const AngularState &t, double b) {
                acc.add(with_lm(t, mu, dl, dm), outer * b);
            });
        }
}

void rod1_cross_mu_lprime(Acc &acc, const AngularState &s, int mu) {
    const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
    for (int dl : {+1, -1})
        for (int dm : {+1, -1}) {
            acc.add(with_lm(s, mu, dl, 0),
                    (kI / 2.0) * double(dl) * C(0, 0, s.L, s.N) *
                        C(dl, -dm, lm, mm + dm) * C(0, dm, lm, mm));
            acc.add(with_lm(with_N(s, -dm), mu, dl, dm),
                    (-kI / 2.0) * C(0, -dm, s.L, s.N) *
                        (dm * C(dl, 0, lm, mm + dm) * C(0, dm, lm, mm) +
                         dl * C(dl, dm, lm, mm) * C(0, 0, lm, mm)));
        }
}

void rod1_lambda_mu_cross1(Acc &acc, const AngularState &s, int mu) {
    const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
    acc.add(s, kI * C(0, 0, lm, mm));
    for (int dm : {+1, -1}) {
        const cplx outer = (kI / 2.0) * double(dm) * C(0, dm, lm, mm);
        for_brace(s, mu, dm, [&](const AngularState &t, double b) {
            acc.add(with_lm(t, mu, 0, dm), outer * b);
        });
    }
}

void rod1_lambda_mu_lprime(Acc &acc, const AngularState &s, int mu) {
    const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
    acc.add(s, -C(0, 0, lm, mm) * C(0, 0, s.L, s.N));
    for (int dm : {+1, -1})
        acc.add(with_lm(with_N(s, -dm), mu, 0, dm),
                -0.5 * C(0, dm, lm, mm) * C(0, -dm, s.L, s.N));
}

// ---------------------------------------------------------------------------
// Rods 1 and 2. The positive brace: a +dm shift on N or on any ordinary rod.
template <typename F>
void for_pos(const AngularState &s, int dm, F &&emit) {
    emit(with_N(s, dm), C(0, dm, s.L, s.N));
    const int nr = n_rods_of(s);
    for (int mu = 3; mu <= nr; ++mu)
        emit(with_lm(s, mu, 0, dm),
             C(0, dm, s.rods[mu - 3].l, s.rods[mu - 3].m));
}

void rod12_eta_eta(Acc &acc, const AngularState &s) {
    for (int dn : {+1, -1})
        acc.add(with_n(s, dn), C(dn, 0, s.n, s.sigma));
}

void rod12_eta1_cross2(Acc &acc, const AngularState &s) {
    const int n = s.n, sg = s.sigma;
    for (int dn : {+1, -1})
        for (int dm : {+1, -1})
            acc.add(with_n(s, dn), (-kI / 2.0) * double(dn) *
                                       C(dn, dm, n, sg - dm) *
                                       C(0, -dm, n, sg));
}

void rod12_eta2_cross1(Acc &acc, const AngularState &s) {
    const int n = s.n, sg = s.sigma;
    for (int dn : {+1, -1})
        for (int dm : {+1, -1}) {
            const cplx outer = (kI / 2.0) * double(dn) * C(dn, dm, n, sg);
            for_pos(s, dm, [&](const AngularState &t, double b) {
                acc.add(with_n(t, dn), outer * b);
            });
            acc.add(with_n(s, dn), (-kI / 2.0) * double(dn) *
                                       C(dn, dm, n, sg - dm) *
                                       C(0, -dm, n, sg));
        }
}

void rod12_eta2_lambda1(Acc &acc, const AngularState &s) {
    const int n = s.n, sg = s.sigma;
    for (int dn : {+1, -1})
        for (int dm : {+1, -1}) {
            const cplx outer = 0.5 * dn * dm * C(dn, dm, n, sg);
            for_pos(s, dm, [&](const AngularState &t, double b) {
                acc.add(with_n(t, dn), outer * b);
            });
            acc.add(with_n(s, dn),
                    -0.5 * C(dn, 0, n, sg) * C(0, 0, n, sg));
        }
}

void rod12_bracket_cross_cross(Acc &acc, const AngularState &s) {
    const int n = s.n, sg = s.sigma;
    for (int dn : {+1, -1})
        for (int dm : {+1, -1}) {
            const cplx outer =
                0.5 * (C(dn, 0, n, sg + dm) * C(0, dm, n, sg) +
                       dn * dm * C(dn, dm, n, sg) * C(0, 0, n, sg));
            for_pos(s, dm, [&](const AngularState &t, double b) {
                acc.add(with_n(t, dn), outer * b);
            });
            acc.add(with_n(s, dn),
                    0.5 * (dn * C(dn, dm, n, sg - dm) * C(0, -dm, n, sg) -
                           casimir(n) * C(dn, 0, n, sg)));
        }
}

void rod12_bracket_cross2_lambda1(Acc &acc, const AngularState &s) {
    const int n = s.n, sg = s.sigma;
    for (int dn : {+1, -1})
        for (int dm : {+1, -1}) {
            const cplx outer =
                (-kI / 2.0) * (dm * C(dn, 0, n, sg + dm) * C(0, dm, n, sg) +
                               dn * C(dn, dm, n, sg) * C(0, 0, n, sg));
            for_pos(s, dm, [&](const AngularState &t, double b) {
                acc.add(with_n(t, dn), outer * b);
            });
            acc.add(with_n(s, dn), (kI / 2.0) * double(dn) * C(0, 0, n, sg) *
                                       C(dn, dm, n, sg - dm) *
                                       C(0, -dm, n, sg));
        }
}

void rod12_bracket_lambda2_cross1(Acc &acc, const AngularState &s) {
    const int n = s.n, sg = s.sigma;
    for (int dm : {+1, -1}) {
        const cplx outer = (kI / 2.0) * double(dm) * C(0, dm, n, sg);
        for_pos(s, dm, [&](const AngularState &t, double b) {
            acc.add(t, outer * b);
        });
        acc.add(s, (-kI / 2.0) * C(0, 0, n, sg));
    }
}

void rod12_bracket_lambda_lambda(Acc &acc, const AngularState &s) {
    const int n = s.n, sg = s.sigma;
    for (int dm : {+1, -1}) {
        const cplx outer = 0.5 * C(0, dm, n, sg);
        for_pos(s, dm, [&](const AngularState &t, double b) {
            acc.add(t, outer * b);
        });
        acc.add(s, 0.5 * (C(0, 0, n, sg) * C(0, 0, n, sg) - casimir(n)));
    }
}

// ---------------------------------------------------------------------------
// Triple products of unit vectors.

void triple_12mu(Acc &acc, const AngularState &s, int mu) {
    const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
    const int n = s.n, sg = s.sigma;
    for (int dn : {+1, -1})
        for (int dl : {+1, -1})
            for (int dm : {+1, -1})
                acc.add(with_lm(with_n(s, dn), mu, dl, dm),
                        (-kI / 2.0) * double(dm * dn * dl) *
                            C(dn, dm, n, sg) * C(dl, dm, lm, mm));
}

void triple_1munu(Acc &acc, const AngularState &s, int mu, int nu) {
    const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
    const int ln = s.rods[nu - 3].l, mn = s.rods[nu - 3].m;
    for (int dlm : {+1, -1})
        for (int dln : {+1, -1})
            for (int dm : {+1, -1})
                acc.add(with_lm(with_lm(s, mu, dlm, dm), nu, dln, -dm),
                        (-kI / 2.0) * double(dm * dlm * dln) *
                            C(dlm, dm, lm, mm) * C(dln, -dm, ln, mn));
}

void triple_2munu(Acc &acc, const AngularState &s, int mu, int nu) {
    const int lm = s.rods[mu - 3].l, mm = s.rods[mu - 3].m;
    const int ln = s.rods[nu - 3].l, mn = s.rods[nu - 3].m;
    const int n = s.n, sg = s.sigma;
    for (int dn : {+1, -1})
        for (int dlm : {+1, -1})
            for (int dln : {+1, -1})
                for (int dm : {+1, -1}) {
                    acc.add(
                        with_lm(with_lm(with_n(s, dn), mu, dlm, dm), nu, dln,
                                -dm),
                        (-kI / 2.0) * double(dm * dlm * dln) *
                            C(dlm, dm, lm, mm) * C(dln, -dm, ln, mn) *
                            C(dn, 0, n, sg));
                    acc.add(with_lm(with_lm(with_n(s, dn), mu, dlm, dm), nu,
                                    dln, 0),
                            (-kI / 2.0) * double(dm * dn * dlm) *
                                C(dn, dm, n, sg) * C(dlm, dm, lm, mm) *
                                C(dln, 0, ln, mn));
                    acc.add(with_lm(with_lm(with_n(s, dn), mu, dlm, 0), nu,
                                    dln, dm),
                            (kI / 2.0) * double(dm * dn * dln) *
                                C(dn, dm, n, sg) * C(dln, dm, ln, mn) *
                                C(dlm, 0, lm, mm));
                }
}

// cos(theta_c) eta_1 . (eta_a x eta_b) building block of the three-rod triple.
void triple_weighted(Acc &acc, const AngularState &s, int a, int b, int c) {
    const int la = s.rods[a - 3].l, ma = s.rods[a - 3].m;
    const int lb = s.rods[b - 3].l, mb = s.rods[b - 3].m;
    const int lc = s.rods[c - 3].l, mc = s.rods[c - 3].m;
    for (int dla : {+1, -1})
        for (int dlb : {+1, -1})
            for (int dlc : {+1, -1})
                for (int dm : {+1, -1})
                    acc.add(with_lm(with_lm(with_lm(s, a, dla, dm), b, dlb,
                                            -dm),
                                    c, dlc, 0),
                            (-kI / 2.0) * double(dm * dla * dlb) *
                                C(dla, dm, la, ma) * C(dlb, -dm, lb, mb) *
                                C(dlc, 0, lc, mc));
}

void triple_munula(Acc &acc, const AngularState &s, int mu, int nu, int la) {
    triple_weighted(acc, s, nu, la, mu);
    triple_weighted(acc, s, la, mu, nu);
    triple_weighted(acc, s, mu, nu, la);
}

}  // namespace

bool is_multiplicative(AngKind k) {
    switch (k) {
    case AngKind::Identity:
    case AngKind::RodLz:
    case AngKind::PairEtaEta:
    case AngKind::Rod2EtaEta:
    case AngKind::Rod1EtaEta:
    case AngKind::Rod12EtaEta:
    case AngKind::Triple12Mu:
    case AngKind::Triple1MuNu:
    case AngKind::Triple2MuNu:
    case AngKind::TripleMuNuLa:
        return true;
    default:
        return false;
    }
}

std::vector<Transition> apply(const AngularOperatorId &op,
                              const AngularState &s) {
    if (!s.valid()) throw InvalidQuantumNumber("apply: invalid source state");
    Acc acc(s);
    const int n = s.n, sg = s.sigma;
    switch (op.kind) {
    case AngKind::Identity:
        acc.add(s, 1.0);
        break;
    case AngKind::RodCasimir:
        require_rod(s, op.mu);
        acc.add(s, casimir(s.rods[op.mu - 3].l));
        break;
    case AngKind::RodLz:
        require_rod(s, op.mu);
        acc.add(s, s.rods[op.mu - 3].m);
        break;
    case AngKind::InternalCasimir:
        acc.add(s, casimir(n));
        break;
    case AngKind::SigmaLz:
        acc.add(s, -sg);
        break;
    case AngKind::TotalCasimir:
        acc.add(s, casimir(s.L));
        break;
    case AngKind::BodyLz:
        acc.add(s, -s.N);
        break;
    case AngKind::SigmaCasimir:
        diag_sigma_casimir(acc, s);
        break;
    case AngKind::SigmaDotLambda2:
        diag_sigma_dot_lambda2(acc, s);
        break;

    case AngKind::PairEtaEta:
        require_rod(s, op.mu), require_rod(s, op.nu);
        require_distinct(op.mu, op.nu);
        pair_eta_eta(acc, s, op.mu, op.nu);
        break;
    case AngKind::PairEtaCrossLambda:
        require_rod(s, op.mu), require_rod(s, op.nu);
        require_distinct(op.mu, op.nu);
        pair_eta_cross(acc, s, op.mu, op.nu);
        break;
    case AngKind::PairCrossCross:
        require_rod(s, op.mu), require_rod(s, op.nu);
        require_distinct(op.mu, op.nu);
        pair_cross_cross(acc, s, op.mu, op.nu);
        break;
    case AngKind::PairEtaLambda:
        require_rod(s, op.mu), require_rod(s, op.nu);
        require_distinct(op.mu, op.nu);
        pair_eta_lambda(acc, s, op.mu, op.nu);
        break;
    case AngKind::PairLambdaCrossLambda:
        require_rod(s, op.mu), require_rod(s, op.nu);
        require_distinct(op.mu, op.nu);
        pair_lambda_cross(acc, s, op.mu, op.nu);
        break;
    case AngKind::PairLambdaLambda:
        require_rod(s, op.mu), require_rod(s, op.nu);
        require_distinct(op.mu, op.nu);
        pair_lambda_lambda(acc, s, op.mu, op.nu);
        break;

    case AngKind::Rod2EtaEta:
        require_rod(s, op.mu);
        rod2_eta_eta(acc, s, op.mu);
        break;
    case AngKind::Rod2EtaCrossMu:
        require_rod(s, op.mu);
        rod2_eta_cross_mu(acc, s, op.mu);
        break;
    case AngKind::Rod2EtaMuCross2:
        require_rod(s, op.mu);
        rod2_eta_mu_cross2(acc, s, op.mu);
        break;
    case AngKind::Rod2CrossCross:
        require_rod(s, op.mu);
        rod2_cross_cross(acc, s, op.mu);
        break;
    case AngKind::Rod2CrossMuLambda2:
        require_rod(s, op.mu);
        rod2_cross_mu_lambda2(acc, s, op.mu);
        break;
    case AngKind::Rod2EtaLambdaMu:
        require_rod(s, op.mu);
        rod2_eta_lambda_mu(acc, s, op.mu);
        break;
    case AngKind::Rod2LambdaMuCross2:
        require_rod(s, op.mu);
        rod2_lambda_mu_cross2(acc, s, op.mu);
        break;
    case AngKind::Rod2EtaMuLambda2:
        require_rod(s, op.mu);
        rod2_eta_mu_lambda2(acc, s, op.mu);
        break;
    case AngKind::Rod2LambdaLambda:
        require_rod(s, op.mu);
        rod2_lambda_lambda(acc, s, op.mu);
        break;

    case AngKind::Rod1EtaEta:
        require_rod(s, op.mu);
        rod1_eta_eta(acc, s, op.mu);
        break;
    case AngKind::Rod1EtaCrossMu:
        require_rod(s, op.mu);
        rod1_eta_cross_mu(acc, s, op.mu);
        break;
    case AngKind::Rod1EtaLambdaMu:
        require_rod(s, op.mu);
        acc.add(s, s.rods[op.mu - 3].m);
        break;
    case AngKind::Rod1EtaMuCross1:
        require_rod(s, op.mu);
        rod1_eta_mu_cross1(acc, s, op.mu);
        break;
    case AngKind::Rod1EtaMuLambda1:
        require_rod(s, op.mu);
        rod1_eta_mu_lambda1(acc, s, op.mu);
        break;
    case AngKind::Rod1CrossCross:
        require_rod(s, op.mu);
        rod1_cross_cross(acc, s, op.mu);
        break;
    case AngKind::Rod1CrossMuLPrime:
        require_rod(s, op.mu);
        rod1_cross_mu_lprime(acc, s, op.mu);
        break;
    case AngKind::Rod1LambdaMuCross1:
        require_rod(s, op.mu);
        rod1_lambda_mu_cross1(acc, s, op.mu);
        break;
    case AngKind::Rod1LambdaMuLPrime:
        require_rod(s, op.mu);
        rod1_lambda_mu_lprime(acc, s, op.mu);
        break;
    case AngKind::Rod1CrossMuLambda1: {
        require_rod(s, op.mu);
        rod1_cross_mu_lprime(acc, s, op.mu);
        Acc sub(s);
        rod2_cross_mu_lambda2(sub, s, op.mu);
        for (auto &t : sub.take()) acc.add(t.target, -t.amplitude);
        const int nr = n_rods_of(s);
        for (int nu = 3; nu <= nr; ++nu) {
            if (nu == op.mu) continue;
            Acc part(s);
            pair_lambda_cross(part, s, nu, op.mu);
            for (auto &t : part.take()) acc.add(t.target, -t.amplitude);
        }
        break;
    }
    case AngKind::Rod1LambdaLambda: {
        require_rod(s, op.mu);
        rod1_lambda_mu_lprime(acc, s, op.mu);
        acc.add(s, -casimir(s.rods[op.mu - 3].l));
        Acc sub(s);
        rod2_lambda_lambda(sub, s, op.mu);
        for (auto &t : sub.take()) acc.add(t.target, -t.amplitude);
        const int nr = n_rods_of(s);
        for (int nu = 3; nu <= nr; ++nu) {
            if (nu == op.mu) continue;
            Acc part(s);
            pair_lambda_lambda(part, s, op.mu, nu);
            for (auto &t : part.take()) acc.add(t.target, -t.amplitude);
        }
        break;
    }

    case AngKind::Rod12EtaEta:
        rod12_eta_eta(acc, s);
        break;
    case AngKind::Rod12Eta1Cross2:
        rod12_eta1_cross2(acc, s);
        break;
    case AngKind::Rod12Eta2Cross1:
        rod12_eta2_cross1(acc, s);
        break;
    case AngKind::Rod12Eta2Lambda1:
        rod12_eta2_lambda1(acc, s);
        break;
    case AngKind::Rod12Eta1Lambda2:
        acc.add(s, -C(0, 0, n, sg));
        break;
    case AngKind::Rod12BracketCrossCross:
        rod12_bracket_cross_cross(acc, s);
        break;
    case AngKind::Rod12BracketCross2Lambda1:
        rod12_bracket_cross2_lambda1(acc, s);
        break;
    case AngKind::Rod12BracketLambda2Cross1:
        rod12_bracket_lambda2_cross1(acc, s);
        break;
    case AngKind::Rod12BracketLambdaLambda:
        rod12_bracket_lambda_lambda(acc, s);
        break;

    case AngKind::Triple12Mu:
        require_rod(s, op.mu);
        triple_12mu(acc, s, op.mu);
        break;
    case AngKind::Triple1MuNu:
        require_rod(s, op.mu), require_rod(s, op.nu);
        if (op.mu == op.nu) break;
        triple_1munu(acc, s, op.mu, op.nu);
        break;
    case AngKind::Triple2MuNu:
        require_rod(s, op.mu), require_rod(s, op.nu);
        if (op.mu == op.nu) break;
        triple_2munu(acc, s, op.mu, op.nu);
        break;
    case AngKind::TripleMuNuLa:
        require_rod(s, op.mu), require_rod(s, op.nu), require_rod(s, op.la);
        if (op.mu == op.nu || op.nu == op.la || op.mu == op.la) break;
        triple_munula(acc, s, op.mu, op.nu, op.la);
        break;
    }
    return acc.take();
}

std::vector<Transition> magnetic_angular(const AngularOperatorId &op,
                                         const AngularState &s) {
    switch (op.kind) {
    case AngKind::Identity:
    case AngKind::Rod12EtaEta:
    case AngKind::Rod1EtaEta:
    case AngKind::Rod2EtaEta:
    case AngKind::PairEtaEta:
    case AngKind::Triple12Mu:
    case AngKind::Triple1MuNu:
    case AngKind::Triple2MuNu:
    case AngKind::TripleMuNuLa:
        return apply(op, s);
    default:
        throw OperatorUnavailable("not a loop-trace operator");
    }
}

Footprint footprint(const AngularOperatorId &op) {
    Footprint f;
    auto all = [&f] { f.sigma_deltas = {-1, 0, 1}; };
    auto none = [&f] { f.sigma_deltas = {0}; };
    switch (op.kind) {
    case AngKind::Identity:
    case AngKind::RodCasimir:
    case AngKind::RodLz:
    case AngKind::InternalCasimir:
    case AngKind::SigmaLz:
    case AngKind::TotalCasimir:
    case AngKind::BodyLz:
    case AngKind::Rod1EtaLambdaMu:
    case AngKind::Rod12Eta1Lambda2:
        none();
        break;
    case AngKind::SigmaCasimir:
        f.can_change_m = f.can_change_body_n = true;
        f.max_rods_changed = 2;
        none();
        break;
    case AngKind::SigmaDotLambda2:
        f.can_change_m = f.can_change_body_n = true;
        f.max_rods_changed = 1;
        all();
        break;
    case AngKind::PairEtaEta:
    case AngKind::PairEtaCrossLambda:
    case AngKind::PairCrossCross:
        f.can_change_l = f.can_change_m = true;
        f.max_rods_changed = 2;
        none();
        break;
    case AngKind::PairEtaLambda:
    case AngKind::PairLambdaCrossLambda:
        f.can_change_l = f.can_change_m = true;
        f.max_rods_changed = 2;
        none();
        break;
    case AngKind::PairLambdaLambda:
        f.can_change_m = true;
        f.max_rods_changed = 2;
        none();
        break;
    case AngKind::Rod2EtaEta:
    case AngKind::Rod2EtaCrossMu:
    case AngKind::Rod2EtaMuCross2:
    case AngKind::Rod2CrossCross:
        f.can_change_n = f.can_change_l = f.can_change_m = true;
        f.max_rods_changed = 2;
        all();
        break;
    case AngKind::Rod2CrossMuLambda2:
    case AngKind::Rod2EtaMuLambda2:
        f.can_change_l = f.can_change_m = true;
        f.max_rods_changed = 1;
        all();
        break;
    case AngKind::Rod2EtaLambdaMu:
    case AngKind::Rod2LambdaMuCross2:
        f.can_change_n = f.can_change_m = true;
        f.max_rods_changed = 2;
        all();
        break;
    case AngKind::Rod2LambdaLambda:
        f.can_change_m = true;
        f.max_rods_changed = 1;
        all();
        break;
    case AngKind::Rod1EtaEta:
    case AngKind::Rod1EtaCrossMu:
        f.can_change_l = true;
        f.max_rods_changed = 1;
        none();
        break;
    case AngKind::Rod1EtaMuCross1:
    case AngKind::Rod1EtaMuLambda1:
    case AngKind::Rod1CrossCross:
    case AngKind::Rod1CrossMuLambda1:
        f.can_change_l = f.can_change_m = f.can_change_body_n = true;
        f.max_rods_changed = 2;
        all();
        break;
    case AngKind::Rod1CrossMuLPrime:
        f.can_change_l = f.can_change_m = f.can_change_body_n = true;
        f.max_rods_changed = 2;
        none();
        break;
    case AngKind::Rod1LambdaMuCross1:
    case AngKind::Rod1LambdaLambda:
        f.can_change_m = f.can_change_body_n = true;
        f.max_rods_changed = 2;
        all();
        break;
    case AngKind::Rod1LambdaMuLPrime:
        f.can_change_m = f.can_change_body_n = true;
        f.max_rods_changed = 2;
        none();
        break;
    case AngKind::Rod12EtaEta:
    case AngKind::Rod12Eta1Cross2:
        f.can_change_n = true;
        f.max_rods_changed = 1;
        none();
        break;
    case AngKind::Rod12Eta2Cross1:
    case AngKind::Rod12Eta2Lambda1:
    case AngKind::Rod12BracketCrossCross:
    case AngKind::Rod12BracketCross2Lambda1:
        f.can_change_n = f.can_change_m = f.can_change_body_n = true;
        f.max_rods_changed = 2;
        all();
        break;
    case AngKind::Rod12BracketLambda2Cross1:
    case AngKind::Rod12BracketLambdaLambda:
        f.can_change_m = f.can_change_body_n = true;
        f.max_rods_changed = 1;
        all();
        break;
    case AngKind::Triple12Mu:
        f.can_change_n = f.can_change_l = f.can_change_m = true;
        f.max_rods_changed = 2;
        f.sigma_deltas = {-1, 1};
        break;
    case AngKind::Triple1MuNu:
        f.can_change_l = f.can_change_m = true;
        f.max_rods_changed = 2;
        none();
        break;
    case AngKind::Triple2MuNu:
        f.can_change_n = f.can_change_l = f.can_change_m = true;
        f.max_rods_changed = 3;
        all();
        break;
    case AngKind::TripleMuNuLa:
        f.can_change_l = f.can_change_m = true;
        f.max_rods_changed = 3;
        none();
        break;
    }
    return f;
}

BilinearClass classify_bilinear(int rod_a, int rod_b) {
    const int lo = std::min(rod_a, rod_b), hi = std::max(rod_a, rod_b);
    if (lo == hi) {
        if (lo == 1) return BilinearClass::Rod1Rod1;
        if (lo == 2) return BilinearClass::Rod2Rod2;
        return BilinearClass::MuMu;
    }
    if (lo == 1 && hi == 2) return BilinearClass::Rod1Rod2;
    if (lo == 1) return BilinearClass::Rod1Mu;
    if (lo == 2) return BilinearClass::Rod2Mu;
    return BilinearClass::MuNu;
}

namespace {

OperatorTerm make_term(RadialKind k, AngularOperatorId op, cplx pref,
                       const char *label) {
    OperatorTerm t;
    t.radial = k;
    t.op = op;
    t.prefactor = pref;
    t.coeff_label = label;
    return t;
}

// The nine-term printed expansion shared by every distinct-rod bilinear.
// X_a is eta_a.(eta_b x Lambda_b), Y_a is eta_a.Lambda_b, and the four
// diagonal ids are the cross.cross, Lambda_b.cross_a, Lambda_a.cross_b and
// Lambda_a.Lambda_b combinations, in that order.
std::vector<OperatorTerm> two_rod_terms(
    int rod_a, int rod_b, Side za, Side zb, AngularOperatorId ee,
    AngularOperatorId xa, AngularOperatorId ya, AngularOperatorId xb,
    AngularOperatorId yb, AngularOperatorId cross_cross,
    AngularOperatorId lb_cross_a, AngularOperatorId la_cross_b,
    AngularOperatorId la_lb) {
    const double dza = delta_sign(za), dzb = delta_sign(zb);
    std::vector<OperatorTerm> out;

    OperatorTerm t = make_term(RadialKind::MixedDerivative, ee, -1.0, "Add");
    t.rod_a = rod_a, t.rod_b = rod_b, t.za = za, t.zb = zb;
    out.push_back(t);

    t = make_term(RadialKind::FirstDerivative, xa, kI / 2.0, "Adel;a");
    t.rod_a = rod_a, t.rod_b = rod_b, t.deriv_rod = rod_a, t.cot_rod = rod_b;
    t.za = za, t.zb = zb;
    out.push_back(t);
    t = make_term(RadialKind::FirstDerivative, ya, -(kI / 2.0) * dzb, "A0;a");
    t.rod_a = rod_a, t.rod_b = rod_b, t.deriv_rod = rod_a, t.cot_rod = 0;
    t.za = za, t.zb = zb;
    out.push_back(t);

    t = make_term(RadialKind::FirstDerivative, xb, kI / 2.0, "Adel;b");
    t.rod_a = rod_a, t.rod_b = rod_b, t.deriv_rod = rod_b, t.cot_rod = rod_a;
    t.za = za, t.zb = zb;
    out.push_back(t);
    t = make_term(RadialKind::FirstDerivative, yb, -(kI / 2.0) * dza, "A0;b");
    t.rod_a = rod_a, t.rod_b = rod_b, t.deriv_rod = rod_b, t.cot_rod = 0;
    t.za = za, t.zb = zb;
    out.push_back(t);

    t = make_term(RadialKind::DiagCotCot, cross_cross, 0.25, "cross.cross");
    t.rod_a = rod_a, t.rod_b = rod_b, t.za = za, t.zb = zb;
    out.push_back(t);
    t = make_term(RadialKind::DiagCot, lb_cross_a, -0.25 * dzb, "Lb.crossa");
    t.rod_a = rod_a, t.rod_b = rod_b, t.cot_rod = rod_a, t.za = za, t.zb = zb;
    out.push_back(t);
    t = make_term(RadialKind::DiagCot, la_cross_b, -0.25 * dza, "La.crossb");
    t.rod_a = rod_a, t.rod_b = rod_b, t.cot_rod = rod_b, t.za = za, t.zb = zb;
    out.push_back(t);
    t = make_term(RadialKind::DiagOne, la_lb, 0.25 * dza * dzb, "La.Lb");
    t.rod_a = rod_a, t.rod_b = rod_b, t.za = za, t.zb = zb;
    out.push_back(t);
    return out;
}

}  // namespace

std::vector<OperatorTerm> bilinear_terms(int rod_a, int rod_b, Side za,
                                         Side zb, int n_rods) {
    if (rod_a < 1 || rod_a > n_rods || rod_b < 1 || rod_b > n_rods)
        throw InvalidQuery("bilinear rod index outside [1, n_rods]");
    if (rod_a > rod_b) return bilinear_terms(rod_b, rod_a, zb, za, n_rods);

    if (rod_a == rod_b) {
        std::vector<OperatorTerm> out;
        OperatorTerm t = make_term(RadialKind::SecondDerivative,
                                   {AngKind::Identity}, -1.0, "d2");
        t.rod_a = rod_a, t.deriv_rod = rod_a, t.za = za, t.zb = zb;
        out.push_back(t);
        t = make_term(RadialKind::FirstDerivative, {AngKind::Identity}, -1.0,
                      "cot.d");
        t.rod_a = rod_a, t.deriv_rod = rod_a, t.cot_rod = rod_a;
        t.za = za, t.zb = zb;
        out.push_back(t);
        auto gamma = [&](AngularOperatorId op, cplx pref, const char *label) {
            OperatorTerm g = make_term(RadialKind::DiagGamma, op, pref, label);
            g.rod_a = rod_a, g.za = za, g.zb = zb;
            out.push_back(g);
        };
        if (n_rods == 1) {
            gamma({AngKind::TotalCasimir}, 1.0, "Gamma");
        } else if (rod_a == 1) {
            gamma({AngKind::SigmaCasimir}, 1.0, "Gamma");
            gamma({AngKind::InternalCasimir}, 1.0, "Gamma");
            gamma({AngKind::SigmaDotLambda2}, -2.0, "Gamma");
        } else if (rod_a == 2) {
            gamma({AngKind::InternalCasimir}, 1.0, "Gamma");
        } else {
            gamma({AngKind::RodCasimir, rod_a}, 1.0, "Gamma");
        }
        return out;
    }

    if (rod_a == 1 && rod_b == 2)
        return two_rod_terms(1, 2, za, zb, {AngKind::Rod12EtaEta},
                             {AngKind::Rod12Eta1Cross2},
                             {AngKind::Rod12Eta1Lambda2},
                             {AngKind::Rod12Eta2Cross1},
                             {AngKind::Rod12Eta2Lambda1},
                             {AngKind::Rod12BracketCrossCross},
                             {AngKind::Rod12BracketLambda2Cross1},
                             {AngKind::Rod12BracketCross2Lambda1},
                             {AngKind::Rod12BracketLambdaLambda});
    if (rod_a == 1) {
        const int mu = rod_b;
        return two_rod_terms(1, mu, za, zb, {AngKind::Rod1EtaEta, mu},
                             {AngKind::Rod1EtaCrossMu, mu},
                             {AngKind::Rod1EtaLambdaMu, mu},
                             {AngKind::Rod1EtaMuCross1, mu},
                             {AngKind::Rod1EtaMuLambda1, mu},
                             {AngKind::Rod1CrossCross, mu},
                             {AngKind::Rod1LambdaMuCross1, mu},
                             {AngKind::Rod1CrossMuLambda1, mu},
                             {AngKind::Rod1LambdaLambda, mu});
    }
    if (rod_a == 2) {
        const int mu = rod_b;
        return two_rod_terms(2, mu, za, zb, {AngKind::Rod2EtaEta, mu},
                             {AngKind::Rod2EtaCrossMu, mu},
                             {AngKind::Rod2EtaLambdaMu, mu},
                             {AngKind::Rod2EtaMuCross2, mu},
                             {AngKind::Rod2EtaMuLambda2, mu},
                             {AngKind::Rod2CrossCross, mu},
                             {AngKind::Rod2LambdaMuCross2, mu},
                             {AngKind::Rod2CrossMuLambda2, mu},
                             {AngKind::Rod2LambdaLambda, mu});
    }
    const int mu = rod_a, nu = rod_b;
    return two_rod_terms(mu, nu, za, zb, {AngKind::PairEtaEta, mu, nu},
                         {AngKind::PairEtaCrossLambda, mu, nu},
                         {AngKind::PairEtaLambda, mu, nu},
                         {AngKind::PairEtaCrossLambda, nu, mu},
                         {AngKind::PairEtaLambda, nu, mu},
                         {AngKind::PairCrossCross, mu, nu},
                         {AngKind::PairLambdaCrossLambda, nu, mu},
                         {AngKind::PairLambdaCrossLambda, mu, nu},
                         {AngKind::PairLambdaLambda, mu, nu});
}

int term_class_count(BilinearClass c, int n_rods) {
    if (n_rods < 2) throw InvalidQuery("term classes need at least two rods");
    AngularState s;
    s.L = 9, s.M = 3, s.N = 2;
    for (int k = 0; k < n_rods - 2; ++k) s.rods.push_back({11 + 2 * k, 2 + k});
    s.sigma = s.recompute_sigma();
    s.n = std::abs(s.sigma) + 7;

    int rod_a = 0, rod_b = 0;
    switch (c) {
    case BilinearClass::Rod1Rod1: rod_a = rod_b = 1; break;
    case BilinearClass::Rod2Rod2: rod_a = rod_b = 2; break;
    case BilinearClass::MuMu:
        if (n_rods < 3) throw InvalidQuery("no ordinary rod");
        rod_a = rod_b = 3;
        break;
    case BilinearClass::Rod1Rod2: rod_a = 1, rod_b = 2; break;
    case BilinearClass::Rod1Mu:
        if (n_rods < 3) throw InvalidQuery("no ordinary rod");
        rod_a = 1, rod_b = 3;
        break;
    case BilinearClass::Rod2Mu:
        if (n_rods < 3) throw InvalidQuery("no ordinary rod");
        rod_a = 2, rod_b = 3;
        break;
    case BilinearClass::MuNu:
        if (n_rods < 4) throw InvalidQuery("needs two ordinary rods");
        rod_a = 3, rod_b = 4;
        break;
    }

    using Signature = std::tuple<int, int, std::vector<std::tuple<int, int, int>>>;
    std::set<Signature> classes;
    for (const auto &term : bilinear_terms(rod_a, rod_b, Side::L, Side::L,
                                           n_rods)) {
        for (const auto &tr : apply(term.op, s)) {
            std::vector<std::tuple<int, int, int>> rod_changes;
            for (int k = 0; k < n_rods - 2; ++k) {
                const int dl = tr.target.rods[k].l - s.rods[k].l;
                const int dm = tr.target.rods[k].m - s.rods[k].m;
                if (dl || dm) rod_changes.push_back({k + 3, dl, dm});
            }
            classes.insert(
                {tr.target.n - s.n, tr.target.N - s.N, rod_changes});
        }
    }
    return static_cast<int>(classes.size());
}

std::vector<CatalogEntry> catalog(int n_rods) {
    std::vector<CatalogEntry> out;
    auto add = [&out](AngKind k, const char *name, int mu = 0, int nu = 0,
                      int la = 0) {
        out.push_back({{k, mu, nu, la}, name});
    };
    add(AngKind::Identity, "identity");
    add(AngKind::InternalCasimir, "polar-tower casimir");
    add(AngKind::SigmaLz, "sigma z-component");
    add(AngKind::TotalCasimir, "total casimir");
    add(AngKind::BodyLz, "body-frame z-component");
    add(AngKind::SigmaCasimir, "sigma casimir");
    add(AngKind::SigmaDotLambda2, "sigma dot rod2-sector");
    add(AngKind::Rod12EtaEta, "axis1 dot axis2");
    add(AngKind::Rod12Eta1Cross2, "axis1 dot (axis2 cross mom2)");
    add(AngKind::Rod12Eta2Cross1, "axis2 dot (axis1 cross mom1)");
    add(AngKind::Rod12Eta2Lambda1, "axis2 dot mom1");
    add(AngKind::Rod12Eta1Lambda2, "axis1 dot mom2");
    add(AngKind::Rod12BracketCrossCross, "cross2 dot cross1 bracket");
    add(AngKind::Rod12BracketCross2Lambda1, "cross2 dot mom1 bracket");
    add(AngKind::Rod12BracketLambda2Cross1, "mom2 dot cross1 bracket");
    add(AngKind::Rod12BracketLambdaLambda, "mom2 dot mom1 bracket");
    if (n_rods >= 3) {
        add(AngKind::RodCasimir, "rod casimir", 3);
        add(AngKind::RodLz, "rod z-component", 3);
        add(AngKind::Rod2EtaEta, "axis2 dot rod axis", 3);
        add(AngKind::Rod2EtaCrossMu, "axis2 dot (rod axis cross rod mom)", 3);
        add(AngKind::Rod2EtaMuCross2, "rod axis dot (axis2 cross mom2)", 3);
        add(AngKind::Rod2CrossCross, "rod cross dot cross2", 3);
        add(AngKind::Rod2CrossMuLambda2, "rod cross dot mom2", 3);
        add(AngKind::Rod2EtaLambdaMu, "axis2 dot rod mom", 3);
        add(AngKind::Rod2LambdaMuCross2, "rod mom dot cross2", 3);
        add(AngKind::Rod2EtaMuLambda2, "rod axis dot mom2", 3);
        add(AngKind::Rod2LambdaLambda, "rod mom dot mom2", 3);
        add(AngKind::Rod1EtaEta, "axis1 dot rod axis", 3);
        add(AngKind::Rod1EtaCrossMu, "axis1 dot (rod axis cross rod mom)", 3);
        add(AngKind::Rod1EtaLambdaMu, "axis1 dot rod mom", 3);
        add(AngKind::Rod1EtaMuCross1, "rod axis dot (axis1 cross mom1)", 3);
        add(AngKind::Rod1EtaMuLambda1, "rod axis dot mom1", 3);
        add(AngKind::Rod1CrossCross, "rod cross dot cross1", 3);
        add(AngKind::Rod1CrossMuLambda1, "rod cross dot mom1", 3);
        add(AngKind::Rod1LambdaMuCross1, "rod mom dot cross1", 3);
        add(AngKind::Rod1LambdaLambda, "rod mom dot mom1", 3);
        add(AngKind::Rod1CrossMuLPrime, "rod cross dot body mom", 3);
        add(AngKind::Rod1LambdaMuLPrime, "rod mom dot body mom", 3);
        add(AngKind::Triple12Mu, "axis1 dot (axis2 cross rod axis)", 3);
    }
    if (n_rods >= 4) {
        add(AngKind::PairEtaEta, "rod axis dot rod axis", 3, 4);
        add(AngKind::PairEtaCrossLambda, "rod axis dot other rod cross", 3, 4);
        add(AngKind::PairCrossCross, "rod cross dot rod cross", 3, 4);
        add(AngKind::PairEtaLambda, "rod axis dot other rod mom", 3, 4);
        add(AngKind::PairLambdaCrossLambda, "rod mom dot other rod cross", 3,
            4);
        add(AngKind::PairLambdaLambda, "rod mom dot rod mom", 3, 4);
        add(AngKind::Triple1MuNu, "axis1 dot (rod cross rod)", 3, 4);
        add(AngKind::Triple2MuNu, "axis2 dot (rod cross rod)", 3, 4);
    }
    if (n_rods >= 5)
        add(AngKind::TripleMuNuLa, "rod axis dot (rod cross rod)", 3, 4, 5);
    return out;
}

}  // namespace smb
