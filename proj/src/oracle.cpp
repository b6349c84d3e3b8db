#include "smb/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "smb/errors.hpp"

namespace smb {

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

}  // namespace

double alp_normalized(int l, int m, double x) {
    if (l < 0) throw InvalidQuantumNumber("alp_normalized: negative degree");
    const int am = std::abs(m);
    if (am > l) return 0.0;
    const double phase_neg = (m < 0 && (am % 2)) ? -1.0 : 1.0;

    double pmm = std::sqrt((2.0 * am + 1.0) / 2.0);
    for (int k = 1; k <= am; ++k)
        pmm *= std::sqrt((2.0 * k - 1.0) / (2.0 * k));
    const double s2 = std::max(0.0, 1.0 - x * x);
    pmm *= std::pow(s2, 0.5 * am);
    if (am % 2) pmm = -pmm;
    if (l == am) return phase_neg * pmm;

    double prev = 0.0, cur = pmm;
    for (int ll = am + 1; ll <= l; ++ll) {
        const double a =
            std::sqrt((4.0 * ll * ll - 1.0) /
                      (double(ll - am) * double(ll + am)));
        const double b =
            std::sqrt((double(ll - 1 - am) * double(ll - 1 + am)) /
                      (4.0 * double(ll - 1) * double(ll - 1) - 1.0));
        const double next = a * (x * cur - b * prev);
        prev = cur;
        cur = next;
    }
    return phase_neg * cur;
}

std::complex<double> sph_harm(int l, int m, double theta, double phi) {
    return alp_normalized(l, m, std::cos(theta)) *
           std::exp(kI * double(m) * phi) / std::sqrt(2.0 * kPi);
}

double wigner_small_d(int L, int M, int N, double beta) {
    if (std::abs(M) > L || std::abs(N) > L)
        throw InvalidQuantumNumber("wigner_small_d: projection exceeds rank");
    const double c = std::cos(beta / 2.0), s = std::sin(beta / 2.0);
    const double norm = std::sqrt(factorial(L + M) * factorial(L - M) *
                                  factorial(L + N) * factorial(L - N));
    const int s_lo = std::max(0, N - M);
    const int s_hi = std::min(L + N, L - M);
    double sum = 0.0;
    for (int k = s_lo; k <= s_hi; ++k) {
        const double den = factorial(L + N - k) * factorial(k) *
                           factorial(M - N + k) * factorial(L - M - k);
        const double sign = ((M - N + k) % 2) ? -1.0 : 1.0;
        sum += sign * std::pow(c, 2 * L + N - M - 2 * k) *
               std::pow(s, M - N + 2 * k) / den;
    }
    return norm * sum;
}

std::complex<double> euler_factor(int L, int M, int N, double alpha,
                                  double beta, double gamma) {
    return std::sqrt((2.0 * L + 1.0) / (8.0 * kPi * kPi)) *
           std::exp(kI * double(M) * alpha) * wigner_small_d(L, -M, N, beta) *
           std::exp(-kI * double(N) * gamma);
}

std::complex<double> eigenfunction_value(const EigenfunctionId &id,
                                         const std::vector<double> &angles) {
    switch (id.kind) {
    case FactorKind::PolarTower:
        if (angles.size() != 1)
            throw InvalidQuery("polar tower factor takes one angle");
        return alp_normalized(id.a, id.b, std::cos(angles[0]));
    case FactorKind::SphericalHarmonic:
        if (angles.size() != 2)
            throw InvalidQuery("spherical harmonic takes two angles");
        return sph_harm(id.a, id.b, angles[0], angles[1]);
    case FactorKind::BodyRotation:
        if (angles.size() != 3)
            throw InvalidQuery("body rotation factor takes three angles");
        return euler_factor(id.a, id.b, id.c, angles[0], angles[1],
                            angles[2]);
    }
    throw InvalidQuery("unknown factor kind");
}

void gauss_legendre(int n, std::vector<double> &nodes,
                    std::vector<double> &weights) {
    if (n < 1) throw InvalidQuery("gauss_legendre: need at least one node");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int k = 1; k <= half; ++k) {
        double t = std::cos(kPi * (k - 0.25) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * t * p1 -
                                   (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        nodes[k - 1] = -t;
        nodes[n - k] = t;
        const double w = 2.0 / ((1.0 - t * t) * dp * dp);
        weights[k - 1] = w;
        weights[n - k] = w;
    }
}

// ---------------------------------------------------------------------------
// Differential realization of the catalog on the explicit coordinates.
// Coordinate groups: 0 = internal polar angle, 1 = body rotation, g >= 2 =
// ordinary rod mu = g + 1. Azimuthal dependence is tracked mode-exactly, so
// azimuthal mismatches vanish identically; colatitude integrals use
// Gauss-Legendre with finite-difference derivatives on the analytic factor.

namespace {

enum class PF : std::uint8_t { Cos, Sin, Cot, Csc, Csc2, CotCsc };
enum class AF : std::uint8_t { Cos, Sin };

struct Step {
    std::uint8_t tag;  // 0 mul(polar), 1 mul(azim), 2 d/d(polar), 3 d/d(azim)
    std::uint8_t a;    // PF for tag 0, azimuthal axis for tags 1 and 3
    std::uint8_t b;    // AF for tag 1
};

Step mulp(PF f) { return {0, static_cast<std::uint8_t>(f), 0}; }
Step mula(int axis, AF f) {
    return {1, static_cast<std::uint8_t>(axis), static_cast<std::uint8_t>(f)};
}
Step derp() { return {2, 0, 0}; }
Step dera(int axis) { return {3, static_cast<std::uint8_t>(axis), 0}; }

struct Term {
    cplx coeff;
    std::map<int, std::vector<Step>> chains;
};
using TS = std::vector<Term>;
using Vec = std::array<TS, 3>;

Term term(cplx c, int g, std::vector<Step> steps) {
    Term t;
    t.coeff = c;
    if (!steps.empty()) t.chains[g] = std::move(steps);
    return t;
}

TS ts_one() { return {Term{1.0, {}}}; }

TS ts_add(TS a, const TS &b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

TS ts_scale(TS a, cplx c) {
    for (auto &t : a) t.coeff *= c;
    return a;
}

// Product AB applies B first; per shared group the A chain is outermost.
TS ts_mul(const TS &a, const TS &b) {
    TS out;
    for (const auto &ta : a)
        for (const auto &tb : b) {
            Term t;
            t.coeff = ta.coeff * tb.coeff;
            t.chains = ta.chains;
            for (const auto &[g, chain] : tb.chains) {
                auto &dst = t.chains[g];
                dst.insert(dst.end(), chain.begin(), chain.end());
            }
            out.push_back(std::move(t));
        }
    return out;
}

TS dot(const Vec &a, const Vec &b) {
    TS out;
    for (int i = 0; i < 3; ++i) out = ts_add(out, ts_mul(a[i], b[i]));
    return out;
}

Vec cross(const Vec &a, const Vec &b) {
    Vec out;
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        out[i] = ts_add(ts_mul(a[j], b[k]), ts_scale(ts_mul(a[k], b[j]), -1.0));
    }
    return out;
}

Vec vsub(Vec a, const Vec &b) {
    for (int i = 0; i < 3; ++i) a[i] = ts_add(a[i], ts_scale(b[i], -1.0));
    return a;
}

Vec eta1_vec() {
    Vec v;
    v[2] = ts_one();
    return v;
}

Vec eta2_vec() {
    Vec v;
    v[0] = {term(1.0, 0, {mulp(PF::Sin)})};
    v[2] = {term(1.0, 0, {mulp(PF::Cos)})};
    return v;
}

Vec eta_rod(int g) {
    Vec v;
    v[0] = {term(1.0, g, {mulp(PF::Sin), mula(0, AF::Cos)})};
    v[1] = {term(1.0, g, {mulp(PF::Sin), mula(0, AF::Sin)})};
    v[2] = {term(1.0, g, {mulp(PF::Cos)})};
    return v;
}

Vec lambda_rod(int g) {
    Vec v;
    v[0] = {term(kI, g, {mula(0, AF::Sin), derp()}),
            term(kI, g, {mulp(PF::Cot), mula(0, AF::Cos), dera(0)})};
    v[1] = {term(-kI, g, {mula(0, AF::Cos), derp()}),
            term(kI, g, {mulp(PF::Cot), mula(0, AF::Sin), dera(0)})};
    v[2] = {term(-kI, g, {dera(0)})};
    return v;
}

Vec lprime_vec() {
    Vec v;
    v[0] = {term(-kI, 1, {mula(1, AF::Cos), mulp(PF::Cot), dera(1)}),
            term(kI, 1, {mula(1, AF::Cos), mulp(PF::Csc), dera(0)}),
            term(-kI, 1, {mula(1, AF::Sin), derp()})};
    v[1] = {term(kI, 1, {mula(1, AF::Sin), mulp(PF::Cot), dera(1)}),
            term(-kI, 1, {mula(1, AF::Sin), mulp(PF::Csc), dera(0)}),
            term(-kI, 1, {mula(1, AF::Cos), derp()})};
    v[2] = {term(-kI, 1, {dera(1)})};
    return v;
}

TS lambda_z_sigma(int n_rods) {
    TS out = {term(-kI, 1, {dera(1)})};
    for (int g = 2; g < n_rods; ++g)
        out = ts_add(out, {term(kI, g, {dera(0)})});
    return out;
}

Vec lambda2_vec(int n_rods) {
    const TS lzs = lambda_z_sigma(n_rods);
    Vec v;
    v[0] = ts_mul({term(-1.0, 0, {mulp(PF::Cot)})}, lzs);
    v[1] = {term(-kI, 0, {derp()})};
    v[2] = lzs;
    return v;
}

Vec lambda1_vec(int n_rods) {
    Vec v = vsub(lprime_vec(), lambda2_vec(n_rods));
    for (int g = 2; g < n_rods; ++g) v = vsub(v, lambda_rod(g));
    return v;
}

Vec lambda_sigma_vec(int n_rods) {
    Vec v = lprime_vec();
    for (int g = 2; g < n_rods; ++g) v = vsub(v, lambda_rod(g));
    return v;
}

TS nhat2_ts(int n_rods) {
    const TS lzs = lambda_z_sigma(n_rods);
    TS out = {term(-1.0, 0, {derp(), derp()}),
              term(-1.0, 0, {mulp(PF::Cot), derp()})};
    return ts_add(out, ts_mul({term(1.0, 0, {mulp(PF::Csc2)})},
                              ts_mul(lzs, lzs)));
}

int rod_group(int mu, int n_rods) {
    if (mu < 3 || mu > n_rods)
        throw OperatorUnavailable("rod index " + std::to_string(mu) +
                                  " outside [3," + std::to_string(n_rods) +
                                  "]");
    return mu - 1;
}

TS build_op(const AngularOperatorId &op, int n_rods) {
    auto rg = [&](int mu) { return rod_group(mu, n_rods); };
    switch (op.kind) {
    case AngKind::Identity:
        return ts_one();
    case AngKind::RodCasimir: {
        const Vec l = lambda_rod(rg(op.mu));
        return dot(l, l);
    }
    case AngKind::RodLz:
        return {term(-kI, rg(op.mu), {dera(0)})};
    case AngKind::InternalCasimir:
        return nhat2_ts(n_rods);
    case AngKind::SigmaLz:
        return lambda_z_sigma(n_rods);
    case AngKind::TotalCasimir: {
        const Vec l = lprime_vec();
        return dot(l, l);
    }
    case AngKind::BodyLz:
        return {term(-kI, 1, {dera(1)})};
    case AngKind::SigmaCasimir: {
        const Vec l = lambda_sigma_vec(n_rods);
        return dot(l, l);
    }
    case AngKind::SigmaDotLambda2:
        return dot(lambda_sigma_vec(n_rods), lambda2_vec(n_rods));

    case AngKind::PairEtaEta:
    case AngKind::PairEtaCrossLambda:
    case AngKind::PairCrossCross:
    case AngKind::PairEtaLambda:
    case AngKind::PairLambdaCrossLambda:
    case AngKind::PairLambdaLambda: {
        if (op.mu == op.nu)
            throw OperatorUnavailable("pair operator needs two distinct rods");
        const int gm = rg(op.mu), gn = rg(op.nu);
        switch (op.kind) {
        case AngKind::PairEtaEta:
            return dot(eta_rod(gm), eta_rod(gn));
        case AngKind::PairEtaCrossLambda:
            return dot(eta_rod(gm), cross(eta_rod(gn), lambda_rod(gn)));
        case AngKind::PairCrossCross:
            return dot(cross(eta_rod(gm), lambda_rod(gm)),
                       cross(eta_rod(gn), lambda_rod(gn)));
        case AngKind::PairEtaLambda:
            return dot(eta_rod(gm), lambda_rod(gn));
        case AngKind::PairLambdaCrossLambda:
            return dot(lambda_rod(gm), cross(eta_rod(gn), lambda_rod(gn)));
        default:
            return dot(lambda_rod(gm), lambda_rod(gn));
        }
    }

    case AngKind::Rod2EtaEta:
        return dot(eta2_vec(), eta_rod(rg(op.mu)));
    case AngKind::Rod2EtaCrossMu: {
        const int g = rg(op.mu);
        return dot(eta2_vec(), cross(eta_rod(g), lambda_rod(g)));
    }
    case AngKind::Rod2EtaMuCross2:
        return dot(eta_rod(rg(op.mu)),
                   cross(eta2_vec(), lambda2_vec(n_rods)));
    case AngKind::Rod2CrossCross: {
        const int g = rg(op.mu);
        return dot(cross(eta_rod(g), lambda_rod(g)),
                   cross(eta2_vec(), lambda2_vec(n_rods)));
    }
    case AngKind::Rod2CrossMuLambda2: {
        const int g = rg(op.mu);
        return dot(cross(eta_rod(g), lambda_rod(g)), lambda2_vec(n_rods));
    }
    case AngKind::Rod2EtaLambdaMu:
        return dot(eta2_vec(), lambda_rod(rg(op.mu)));
    case AngKind::Rod2LambdaMuCross2:
        return dot(lambda_rod(rg(op.mu)),
                   cross(eta2_vec(), lambda2_vec(n_rods)));
    case AngKind::Rod2EtaMuLambda2:
        return dot(eta_rod(rg(op.mu)), lambda2_vec(n_rods));
    case AngKind::Rod2LambdaLambda:
        return dot(lambda_rod(rg(op.mu)), lambda2_vec(n_rods));

    case AngKind::Rod1EtaEta:
        return dot(eta1_vec(), eta_rod(rg(op.mu)));
    case AngKind::Rod1EtaCrossMu: {
        const int g = rg(op.mu);
        return dot(eta1_vec(), cross(eta_rod(g), lambda_rod(g)));
    }
    case AngKind::Rod1EtaLambdaMu:
        return dot(eta1_vec(), lambda_rod(rg(op.mu)));
    case AngKind::Rod1EtaMuCross1:
        return dot(eta_rod(rg(op.mu)),
                   cross(eta1_vec(), lambda1_vec(n_rods)));
    case AngKind::Rod1EtaMuLambda1:
        return dot(eta_rod(rg(op.mu)), lambda1_vec(n_rods));
    case AngKind::Rod1CrossCross: {
        const int g = rg(op.mu);
        return dot(cross(eta_rod(g), lambda_rod(g)),
                   cross(eta1_vec(), lambda1_vec(n_rods)));
    }
    case AngKind::Rod1CrossMuLambda1: {
        const int g = rg(op.mu);
        return dot(cross(eta_rod(g), lambda_rod(g)), lambda1_vec(n_rods));
    }
    case AngKind::Rod1LambdaMuCross1:
        return dot(lambda_rod(rg(op.mu)),
                   cross(eta1_vec(), lambda1_vec(n_rods)));
    case AngKind::Rod1LambdaLambda:
        return dot(lambda_rod(rg(op.mu)), lambda1_vec(n_rods));
    case AngKind::Rod1CrossMuLPrime: {
        const int g = rg(op.mu);
        return dot(cross(eta_rod(g), lambda_rod(g)), lprime_vec());
    }
    case AngKind::Rod1LambdaMuLPrime:
        return dot(lambda_rod(rg(op.mu)), lprime_vec());

    case AngKind::Rod12EtaEta:
        return dot(eta1_vec(), eta2_vec());
    case AngKind::Rod12Eta1Cross2:
        return dot(eta1_vec(), cross(eta2_vec(), lambda2_vec(n_rods)));
    case AngKind::Rod12Eta2Cross1:
        return dot(eta2_vec(), cross(eta1_vec(), lambda1_vec(n_rods)));
    case AngKind::Rod12Eta2Lambda1:
        return dot(eta2_vec(), lambda1_vec(n_rods));
    case AngKind::Rod12Eta1Lambda2:
        return dot(eta1_vec(), lambda2_vec(n_rods));
    case AngKind::Rod12BracketCrossCross:
        return ts_add(
            dot(cross(eta2_vec(), lambda2_vec(n_rods)),
                cross(eta1_vec(), lambda1_vec(n_rods))),
            ts_mul({term(kI, 0, {mulp(PF::Csc2)})},
                   dot(eta2_vec(), cross(eta1_vec(), lambda1_vec(n_rods)))));
    case AngKind::Rod12BracketCross2Lambda1:
        return ts_add(dot(cross(eta2_vec(), lambda2_vec(n_rods)),
                          lambda1_vec(n_rods)),
                      ts_mul({term(kI, 0, {mulp(PF::Csc2)})},
                             dot(eta2_vec(), lambda1_vec(n_rods))));
    case AngKind::Rod12BracketLambda2Cross1:
        return ts_add(
            dot(lambda2_vec(n_rods),
                cross(eta1_vec(), lambda1_vec(n_rods))),
            ts_mul({term(-kI, 0, {mulp(PF::CotCsc)})},
                   dot(eta2_vec(), lambda1_vec(n_rods))));
    case AngKind::Rod12BracketLambdaLambda:
        return ts_add(
            dot(lambda2_vec(n_rods), lambda1_vec(n_rods)),
            ts_mul({term(kI, 0, {mulp(PF::CotCsc)})},
                   dot(eta2_vec(), cross(eta1_vec(), lambda1_vec(n_rods)))));

    case AngKind::Triple12Mu:
        return dot(eta1_vec(), cross(eta2_vec(), eta_rod(rg(op.mu))));
    case AngKind::Triple1MuNu:
        if (op.mu == op.nu) return {};
        return dot(eta1_vec(), cross(eta_rod(rg(op.mu)), eta_rod(rg(op.nu))));
    case AngKind::Triple2MuNu:
        if (op.mu == op.nu) return {};
        return dot(eta2_vec(), cross(eta_rod(rg(op.mu)), eta_rod(rg(op.nu))));
    case AngKind::TripleMuNuLa:
        if (op.mu == op.nu || op.nu == op.la || op.mu == op.la) return {};
        return dot(eta_rod(rg(op.mu)),
                   cross(eta_rod(rg(op.nu)), eta_rod(rg(op.la))));
    }
    throw OperatorUnavailable("unknown operator kind");
}

// ---------------------------------------------------------------------------
// Group evaluation.

struct GroupLabels {
    int kind = 0;  // 0 tower, 1 body rotation, 2 rod
    std::array<int, 3> v{0, 0, 0};
    bool operator==(const GroupLabels &o) const {
        return kind == o.kind && v == o.v;
    }
};

GroupLabels group_labels(const AngularState &s, int g) {
    GroupLabels out;
    if (g == 0) {
        out.kind = 0;
        out.v = {s.n, s.sigma, 0};
    } else if (g == 1) {
        out.kind = 1;
        out.v = {s.L, s.M, s.N};
    } else {
        out.kind = 2;
        out.v = {s.rods[g - 2].l, s.rods[g - 2].m, 0};
    }
    return out;
}

// Azimuthal ket modes per axis; tower has none, body rotation has two.
std::array<int, 2> azim_modes(const GroupLabels &gl) {
    if (gl.kind == 1) return {gl.v[1], -gl.v[2]};
    if (gl.kind == 2) return {gl.v[1], 0};
    return {0, 0};
}

int azim_axes(const GroupLabels &gl) {
    if (gl.kind == 1) return 2;
    if (gl.kind == 2) return 1;
    return 0;
}

double polar_base(const GroupLabels &gl, double theta) {
    switch (gl.kind) {
    case 0:
        return alp_normalized(gl.v[0], gl.v[1], std::cos(theta));
    case 1:
        return std::sqrt((2.0 * gl.v[0] + 1.0) / 2.0) *
               wigner_small_d(gl.v[0], -gl.v[1], gl.v[2], theta);
    default:
        return alp_normalized(gl.v[0], gl.v[1], std::cos(theta));
    }
}

double pf_value(PF f, double theta) {
    const double s = std::sin(theta), c = std::cos(theta);
    switch (f) {
    case PF::Cos: return c;
    case PF::Sin: return s;
    case PF::Cot: return c / s;
    case PF::Csc: return 1.0 / s;
    case PF::Csc2: return 1.0 / (s * s);
    case PF::CotCsc: return c / (s * s);
    }
    return 0.0;
}

struct PolarEvaluator {
    const std::vector<Step> *chain;
    GroupLabels ket;
    double fd_step;

    double eval(std::size_t i, double theta) const {
        if (i == chain->size()) return polar_base(ket, theta);
        const Step s = (*chain)[i];
        if (s.tag == 0) return pf_value(PF(s.a), theta) * eval(i + 1, theta);
        // Central 8th-order first difference, step shrunk near the endpoints
        // so the stencil stays inside (0, pi).
        const double margin = std::min(theta, kPi - theta);
        const double h = std::min(fd_step, 0.18 * margin);
        static constexpr double c1 = 4.0 / 5.0, c2 = -1.0 / 5.0,
                                c3 = 4.0 / 105.0, c4 = -1.0 / 280.0;
        const double d =
            c1 * (eval(i + 1, theta + h) - eval(i + 1, theta - h)) +
            c2 * (eval(i + 1, theta + 2 * h) - eval(i + 1, theta - 2 * h)) +
            c3 * (eval(i + 1, theta + 3 * h) - eval(i + 1, theta - 3 * h)) +
            c4 * (eval(i + 1, theta + 4 * h) - eval(i + 1, theta - 4 * h));
        return d / h;
    }
};

std::map<std::string, double> &polar_memo() {
    static std::map<std::string, double> memo;
    return memo;
}
std::mutex &polar_memo_mutex() {
    static std::mutex mx;
    return mx;
}

std::string polar_key(const GroupLabels &bra, const GroupLabels &ket,
                      const std::vector<Step> &chain,
                      const QuadratureSpec &q) {
    std::string k;
    k.reserve(64);
    auto put = [&k](int v) {
        k += std::to_string(v);
        k += ',';
    };
    put(bra.kind);
    for (int v : bra.v) put(v);
    for (int v : ket.v) put(v);
    put(q.polar_nodes);
    k += std::to_string(q.fd_step);
    k += ';';
    for (const Step &s : chain) {
        k += char('a' + s.tag);
        k += char('0' + s.a);
        k += char('0' + s.b);
    }
    return k;
}

double polar_integral(const GroupLabels &bra, const GroupLabels &ket,
                      const std::vector<Step> &chain,
                      const QuadratureSpec &q) {
    const std::string key = polar_key(bra, ket, chain, q);
    {
        std::lock_guard<std::mutex> lock(polar_memo_mutex());
        auto it = polar_memo().find(key);
        if (it != polar_memo().end()) return it->second;
    }
    std::vector<double> x, w;
    gauss_legendre(q.polar_nodes, x, w);
    const PolarEvaluator ev{&chain, ket, q.fd_step};
    double sum = 0.0;
    for (int i = 0; i < q.polar_nodes; ++i) {
        const double theta = 0.5 * kPi * (x[i] + 1.0);
        sum += 0.5 * kPi * w[i] * std::sin(theta) * polar_base(bra, theta) *
               ev.eval(0, theta);
    }
    std::lock_guard<std::mutex> lock(polar_memo_mutex());
    polar_memo().emplace(key, sum);
    return sum;
}

// Walks the chain from the innermost step tracking exact azimuthal modes;
// returns the summed path factor, zero unless every axis lands on the bra
// mode.
cplx azimuthal_factor(const GroupLabels &bra, const GroupLabels &ket,
                      const std::vector<Step> &chain) {
    struct Path {
        cplx scalar;
        std::array<int, 2> mode;
    };
    std::vector<Path> paths{{1.0, azim_modes(ket)}};
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        const Step s = *it;
        if (s.tag == 1) {
            std::vector<Path> next;
            next.reserve(paths.size() * 2);
            for (const Path &p : paths)
                for (int sh : {+1, -1}) {
                    Path np = p;
                    np.scalar *= (AF(s.b) == AF::Cos) ? cplx{0.5, 0.0}
                                                      : cplx{0.0, -0.5 * sh};
                    np.mode[s.a] += sh;
                    next.push_back(np);
                }
            paths = std::move(next);
        } else if (s.tag == 3) {
            for (Path &p : paths) p.scalar *= cplx{0.0, double(p.mode[s.a])};
        }
    }
    const auto want = azim_modes(bra);
    cplx total = 0.0;
    for (const Path &p : paths)
        if (p.mode == want) total += p.scalar;
    return total;
}

}  // namespace

std::complex<double> quadrature_matrix_element(const AngularOperatorId &op,
                                               const AngularState &bra,
                                               const AngularState &ket,
                                               const QuadratureSpec &q) {
    if (bra.rods.size() != ket.rods.size())
        throw InvalidQuery("bra and ket carry different rod counts");
    if (!bra.valid() || !ket.valid())
        throw InvalidQuantumNumber("quadrature on invalid state");
    if (q.fd_order != 8)
        throw InvalidQuery("only the 8th-order difference stencil is built");

    const int n_rods = 2 + static_cast<int>(ket.rods.size());
    const TS ts = build_op(op, n_rods);
    cplx total = 0.0;
    for (const Term &t : ts) {
        cplx val = t.coeff;
        for (int g = 0; g < n_rods && val != cplx{0.0, 0.0}; ++g) {
            const GroupLabels bl = group_labels(bra, g);
            const GroupLabels kl = group_labels(ket, g);
            const auto it = t.chains.find(g);
            if (it == t.chains.end()) {
                if (!(bl == kl)) val = 0.0;
                continue;
            }
            std::vector<Step> polar;
            for (const Step &s : it->second)
                if (s.tag == 0 || s.tag == 2) polar.push_back(s);
            const cplx az = azimuthal_factor(bl, kl, it->second);
            if (az == cplx{0.0, 0.0}) {
                val = 0.0;
                continue;
            }
            val *= az * polar_integral(bl, kl, polar, q);
        }
        total += val;
    }
    return total;
}

Eigen::MatrixXcd gram_matrix(const std::vector<AngularState> &states,
                             const QuadratureSpec &q) {
    const auto n = static_cast<Eigen::Index>(states.size());
    Eigen::MatrixXcd G(n, n);
    const std::vector<Step> empty_chain;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) {
            const auto &a = states[i], &b = states[j];
            if (a.rods.size() != b.rods.size())
                throw InvalidQuery("gram states carry different rod counts");
            const int n_rods = 2 + static_cast<int>(a.rods.size());
            cplx val = 1.0;
            for (int g = 0; g < n_rods && val != cplx{0.0, 0.0}; ++g) {
                const GroupLabels bl = group_labels(a, g);
                const GroupLabels kl = group_labels(b, g);
                if (azim_modes(bl) != azim_modes(kl)) {
                    val = 0.0;
                    continue;
                }
                val *= polar_integral(bl, kl, empty_chain, q);
            }
            G(i, j) = val;
            G(j, i) = std::conj(val);
        }
    return G;
}

SpectrumReference single_rod_spectrum_reference(double g,
                                                const std::vector<int> &ladder,
                                                double a) {
    if (ladder.size() < 3)
        throw InvalidQuery("spectrum reference needs at least three grids");
    for (std::size_t i = 1; i < ladder.size(); ++i)
        if (ladder[i] <= ladder[i - 1])
            throw InvalidQuery("grid ladder must be strictly increasing");
    constexpr int kLevels = 5;

    std::vector<std::array<double, kLevels>> levels;
    std::vector<double> steps;
    for (int n_omega : ladder) {
        if (n_omega < kLevels + 1)
            throw InvalidQuery("grid too small for five levels");
        const double h = 2.0 * kPi / (n_omega + 1);
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n_omega, n_omega);
        const double kin = g * g / (2.0 * a);
        for (int j = 0; j < n_omega; ++j) {
            const double w = h * (j + 1);
            H(j, j) = kin * (2.0 / (h * h) - 0.25) +
                      (1.0 / (2.0 * g * g * a)) * 2.0 *
                          (2.0 - 2.0 * std::cos(w / 2.0));
            if (j + 1 < n_omega) {
                H(j, j + 1) = -kin / (h * h);
                H(j + 1, j) = -kin / (h * h);
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
        if (solver.info() != Eigen::Success)
            throw SpectrumFailed("dense eigensolver failed");
        std::array<double, kLevels> lv{};
        for (int k = 0; k < kLevels; ++k) lv[k] = solver.eigenvalues()(k);
        levels.push_back(lv);
        steps.push_back(h);
    }

    SpectrumReference out;
    out.ladder = ladder;
    const std::size_t last = levels.size() - 1;
    for (int k = 0; k < kLevels; ++k) {
        for (std::size_t i = 0; i + 2 < levels.size(); ++i) {
            const double d1 = levels[i + 1][k] - levels[i][k];
            const double d2 = levels[i + 2][k] - levels[i + 1][k];
            if (std::abs(d2) >= std::abs(d1) || d1 * d2 < 0.0)
                throw ExtrapolationUnreliable(
                    "grid sequence does not converge monotonically");
        }
        const double r = steps[last - 1] / steps[last];
        const double r2 = r * r;
        const double e_prev = levels[last - 1][k];
        const double e_last = levels[last][k];
        out.eigenvalues.push_back((r2 * e_last - e_prev) / (r2 - 1.0));
        out.error_estimates.push_back(std::abs(e_last - e_prev) / (r2 - 1.0));
    }
    return out;
}

}  // namespace smb
