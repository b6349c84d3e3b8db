#include "smb/hamiltonian.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "smb/errors.hpp"

namespace smb {

namespace {

using cplx = std::complex<double>;
using Trip = Eigen::Triplet<cplx>;

constexpr long kAssemblyDimCap = 3'000'000;

struct RoleMap {
    int n_rods = 0;
    std::vector<int> rod_of_kappa;
};

RoleMap role_map(const LatticeTree &tree, const RodRoles &roles) {
    const int nl = tree.n_physical();
    if (nl < 1)
        throw RodUnknown("lattice has no physical links");
    RoleMap rm;
    rm.n_rods = nl;
    rm.rod_of_kappa.assign(static_cast<std::size_t>(nl), 0);
    if (nl == 1) {
        rm.rod_of_kappa[0] = 1;
        return rm;
    }
    const int r1 = roles.rod1_link;
    const int r2 = roles.rod2_link;
    if (r1 < 1 || r1 > nl || r2 < 1 || r2 > nl || r1 == r2)
        throw RodUnknown("role links must be two distinct physical links");
    rm.rod_of_kappa[static_cast<std::size_t>(r1 - 1)] = 1;
    rm.rod_of_kappa[static_cast<std::size_t>(r2 - 1)] = 2;
    int next = 3;
    for (int k = 1; k <= nl; ++k) {
        if (k == r1 || k == r2)
            continue;
        rm.rod_of_kappa[static_cast<std::size_t>(k - 1)] = next++;
    }
    return rm;
}

BasisIndex build_angular_basis(const HamiltonianParams &p, int n_rods) {
    const Truncation &t = p.truncation;
    if (n_rods == 1) {
        const Sector &s = t.sector;
        if (s.L != 0 || s.M != 0 || (s.N && *s.N != 0))
            throw InvalidQuery(
                "a single-link lattice carries only the scalar multiplet");
        AngularState scalar;
        scalar.n = 0;
        scalar.L = 0;
        scalar.M = 0;
        scalar.N = 0;
        scalar.sigma = 0;
        return BasisIndex({scalar});
    }
    if (p.pin_sector)
        return enumerate_states(n_rods, t);
    std::vector<AngularState> all;
    Truncation block = t;
    block.sector.N.reset();
    for (int L = 0; L <= t.l_max; ++L) {
        for (int M = -L; M <= L; ++M) {
            block.sector.L = L;
            block.sector.M = M;
            try {
                const BasisIndex b = enumerate_states(n_rods, block);
                all.insert(all.end(), b.states().begin(), b.states().end());
            } catch (const SectorEmpty &) {
            }
        }
    }
    if (all.empty())
        throw SectorEmpty("no states below the truncation in any block");
    return BasisIndex(all);
}

struct RadialBlocks {
    RealSparse d1;
    RealSparse d2;
    RealSparse cot_half;
    RealSparse gamma_same;
    RealSparse gamma_diff;
    Eigen::VectorXd cos_half;
    Eigen::VectorXd sin_half;
};

RadialBlocks make_blocks(const RadialGrid &grid, StencilOrder order) {
    RadialBlocks b;
    b.d1 = first_derivative(grid, order);
    b.d2 = second_derivative(grid, order);
    b.cot_half = diagonal_matrix(
        grid, [](double w) { return std::cos(0.5 * w) / std::sin(0.5 * w); });
    b.gamma_same = gamma_diagonal(grid, true);
    b.gamma_diff = gamma_diagonal(grid, false);
    const std::vector<double> nodes = grid.nodes();
    const long n = static_cast<long>(nodes.size());
    b.cos_half.resize(n);
    b.sin_half.resize(n);
    for (long i = 0; i < n; ++i) {
        b.cos_half[i] = std::cos(0.5 * nodes[static_cast<std::size_t>(i)]);
        b.sin_half[i] = std::sin(0.5 * nodes[static_cast<std::size_t>(i)]);
    }
    return b;
}

struct Assembler {
    const BasisIndex *ang = nullptr;
    int n_rods = 0;
    int n_omega = 0;
    long rad_total = 1;
    std::vector<long> stride;
    std::vector<Trip> trips;
    std::map<std::tuple<int, int, int, int>, CplxSparse> ang_cache;

    void init(const BasisIndex &basis, int rods, int n_om) {
        ang = &basis;
        n_rods = rods;
        n_omega = n_om;
        stride.assign(static_cast<std::size_t>(rods) + 1, 1);
        rad_total = 1;
        for (int r = 1; r <= rods; ++r) {
            stride[static_cast<std::size_t>(r)] = rad_total;
            rad_total *= n_om;
            if (rad_total > kAssemblyDimCap)
                throw TooLarge("radial product space exceeds the assembly cap");
        }
        const long dim = rad_total * static_cast<long>(basis.dim());
        if (dim > kAssemblyDimCap)
            throw TooLarge("assembled dimension exceeds the assembly cap");
    }

    const CplxSparse &angular_matrix(const AngularOperatorId &id) {
        const auto key = std::make_tuple(static_cast<int>(id.kind), id.mu,
                                         id.nu, id.la);
        auto it = ang_cache.find(key);
        if (it != ang_cache.end())
            return it->second;
        const long d = static_cast<long>(ang->dim());
        std::vector<Trip> tr;
        for (long col = 0; col < d; ++col) {
            const auto transitions =
                apply(id, ang->state(static_cast<std::size_t>(col)));
            for (const Transition &t : transitions) {
                if (auto row = ang->find(t.target))
                    tr.emplace_back(static_cast<long>(*row), col, t.amplitude);
            }
        }
        CplxSparse m(d, d);
        m.setFromTriplets(tr.begin(), tr.end());
        auto ins = ang_cache.emplace(key, std::move(m));
        return ins.first->second;
    }

    // Tensor contribution coeff * (factor matrices on their rods) * A,
    // identity on every untouched rod.
    void add_term(const CplxSparse &a,
                  const std::vector<std::pair<int, const RealSparse *>> &factors,
                  cplx coeff) {
        if (coeff == cplx{0.0, 0.0})
            return;
        std::vector<long> free_offsets = offsets_excluding(factors);
        for (int k = 0; k < a.outerSize(); ++k) {
            for (CplxSparse::InnerIterator ia(a, k); ia; ++ia) {
                const long arow = ia.row() * rad_total;
                const long acol = ia.col() * rad_total;
                const cplx base = coeff * ia.value();
                emit(factors, 0, arow, acol, base, free_offsets);
            }
        }
    }

    // Purely diagonal radial weight (one value per flattened radial index).
    void add_diagonal_term(const CplxSparse &a, const Eigen::VectorXd &radval,
                           cplx coeff) {
        for (int k = 0; k < a.outerSize(); ++k) {
            for (CplxSparse::InnerIterator ia(a, k); ia; ++ia) {
                const long arow = ia.row() * rad_total;
                const long acol = ia.col() * rad_total;
                const cplx base = coeff * ia.value();
                for (long f = 0; f < rad_total; ++f) {
                    const double w = radval[f];
                    if (w == 0.0)
                        continue;
                    trips.emplace_back(arow + f, acol + f, base * w);
                }
            }
        }
    }

  private:
    std::vector<long> offsets_excluding(
        const std::vector<std::pair<int, const RealSparse *>> &factors) const {
        std::vector<int> free_rods;
        for (int r = 1; r <= n_rods; ++r) {
            bool touched = false;
            for (const auto &f : factors)
                touched = touched || f.first == r;
            if (!touched)
                free_rods.push_back(r);
        }
        long count = 1;
        for (std::size_t i = 0; i < free_rods.size(); ++i)
            count *= n_omega;
        std::vector<long> offsets(static_cast<std::size_t>(count), 0);
        for (long f = 0; f < count; ++f) {
            long rem = f;
            long off = 0;
            for (int r : free_rods) {
                off += (rem % n_omega) * stride[static_cast<std::size_t>(r)];
                rem /= n_omega;
            }
            offsets[static_cast<std::size_t>(f)] = off;
        }
        return offsets;
    }

    void emit(const std::vector<std::pair<int, const RealSparse *>> &factors,
              std::size_t fi, long row, long col, cplx value,
              const std::vector<long> &free_offsets) {
        if (fi == factors.size()) {
            for (long off : free_offsets)
                trips.emplace_back(row + off, col + off, value);
            return;
        }
        const int rod = factors[fi].first;
        const RealSparse &m = *factors[fi].second;
        const long s = stride[static_cast<std::size_t>(rod)];
        for (int k = 0; k < m.outerSize(); ++k) {
            for (RealSparse::InnerIterator im(m, k); im; ++im) {
                emit(factors, fi + 1, row + im.row() * s, col + im.col() * s,
                     value * im.value(), free_offsets);
            }
        }
    }
};

std::vector<std::pair<int, const RealSparse *>>
radial_factors(const OperatorTerm &t, const RadialBlocks &b) {
    switch (t.radial) {
    case RadialKind::SecondDerivative:
        return {{t.deriv_rod, &b.d2}};
    case RadialKind::FirstDerivative: {
        std::vector<std::pair<int, const RealSparse *>> f{{t.deriv_rod, &b.d1}};
        if (t.cot_rod != 0 && t.cot_rod != t.deriv_rod)
            f.emplace_back(t.cot_rod, &b.cot_half);
        if (t.cot_rod == t.deriv_rod)
            throw OperatorUnavailable(
                "same-rod weighted derivative survives only before the "
                "measure substitution");
        return f;
    }
    case RadialKind::MixedDerivative:
        return {{t.rod_a, &b.d1}, {t.rod_b, &b.d1}};
    case RadialKind::DiagGamma:
        return {{t.rod_a, t.za == t.zb ? &b.gamma_same : &b.gamma_diff}};
    case RadialKind::DiagCot:
        return {{t.cot_rod, &b.cot_half}};
    case RadialKind::DiagCotCot:
        return {{t.rod_a, &b.cot_half}, {t.rod_b, &b.cot_half}};
    case RadialKind::DiagOne:
        return {};
    }
    throw OperatorUnavailable("unknown radial kind");
}

const char *class_name(BilinearClass c) {
    switch (c) {
    case BilinearClass::Rod1Rod1:
        return "11";
    case BilinearClass::Rod2Rod2:
        return "22";
    case BilinearClass::MuMu:
        return "mm";
    case BilinearClass::Rod1Rod2:
        return "12";
    case BilinearClass::Rod1Mu:
        return "1m";
    case BilinearClass::Rod2Mu:
        return "2m";
    case BilinearClass::MuNu:
        return "mn";
    }
    return "??";
}

AssembledOperator finish(Assembler &as, const BasisIndex &basis, int n_rods,
                         int n_omega, long term_count,
                         std::map<std::string, long> tally) {
    const long dim = as.rad_total * static_cast<long>(basis.dim());
    CplxSparse h(dim, dim);
    h.setFromTriplets(as.trips.begin(), as.trips.end());
    as.trips.clear();
    as.trips.shrink_to_fit();
    CplxSparse hadj = CplxSparse(h.adjoint());
    CplxSparse asym = 0.5 * (h - hadj);
    CplxSparse sym = 0.5 * (h + hadj);

    AssembledOperator out;
    out.report.asymmetry_norm = asym.norm();
    double peak = 0.0;
    for (int k = 0; k < sym.outerSize(); ++k)
        for (CplxSparse::InnerIterator it(sym, k); it; ++it)
            peak = std::max(peak, std::abs(it.value()));
    if (peak > 0.0)
        sym.prune(peak, 1e-14);
    out.report.matrix_norm = sym.norm();
    out.report.term_count = term_count;
    out.report.term_tally = std::move(tally);
    out.matrix = std::move(sym);
    out.angular = basis;
    out.n_rods = n_rods;
    out.n_omega = n_omega;
    return out;
}

AngularOperatorId dot_id(int a, int b) {
    if (a == 1 && b == 2)
        return {AngKind::Rod12EtaEta};
    if (a == 1)
        return {AngKind::Rod1EtaEta, b};
    if (a == 2)
        return {AngKind::Rod2EtaEta, b};
    return {AngKind::PairEtaEta, a, b};
}

// n_a . (n_b x n_c) reduced to the canonical ascending-rod form; the sign
// tracks the permutation parity. Zero factor when a rod repeats.
struct SignedTriple {
    AngularOperatorId id;
    double sign = 0.0;
};

SignedTriple triple_id(int a, int b, int c) {
    SignedTriple st;
    int r[3] = {a, b, c};
    double sign = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i + 1 < 3; ++i) {
            if (r[i] > r[i + 1]) {
                std::swap(r[i], r[i + 1]);
                sign = -sign;
            }
        }
    }
    if (r[0] == r[1] || r[1] == r[2])
        return st;
    st.sign = sign;
    if (r[0] == 1 && r[1] == 2)
        st.id = {AngKind::Triple12Mu, r[2]};
    else if (r[0] == 1)
        st.id = {AngKind::Triple1MuNu, r[1], r[2]};
    else if (r[0] == 2)
        st.id = {AngKind::Triple2MuNu, r[1], r[2]};
    else
        st.id = {AngKind::TripleMuNuLa, r[0], r[1], r[2]};
    return st;
}

} // namespace

long AssembledOperator::radial_dim() const {
    long r = 1;
    for (int i = 0; i < n_rods; ++i)
        r *= n_omega;
    return r;
}

long AssembledOperator::dim() const {
    return radial_dim() * static_cast<long>(angular.dim());
}

AssembledOperator assemble_electric(const LatticeTree &tree,
                                    const HamiltonianParams &p) {
    const RoleMap rm = role_map(tree, p.roles);
    const int nl = rm.n_rods;
    const BasisIndex basis = build_angular_basis(p, nl);
    const RadialGrid grid{p.n_omega};
    const RadialBlocks blocks = make_blocks(grid, p.stencil);
    const ElectricCoefficients table = electric_coefficients(tree);

    Assembler as;
    as.init(basis, nl, p.n_omega);
    long term_count = 0;
    std::map<std::string, long> tally;

    const double kin = p.g * p.g / (2.0 * p.a);
    const Side sides[2] = {Side::L, Side::R};
    for (int ka = 1; ka <= nl; ++ka) {
        for (int kb = ka; kb <= nl; ++kb) {
            for (int ia = 0; ia < 2; ++ia) {
                for (int ib = 0; ib < 2; ++ib) {
                    if (ka == kb && ib < ia)
                        continue;
                    const Side za = sides[ia];
                    const Side zb = sides[ib];
                    const int c = table.at(ka, kb, za, zb);
                    if (c == 0)
                        continue;
                    const double weight =
                        (ka == kb && ia == ib) ? 1.0 : 2.0;
                    const int ra =
                        rm.rod_of_kappa[static_cast<std::size_t>(ka - 1)];
                    const int rb =
                        rm.rod_of_kappa[static_cast<std::size_t>(kb - 1)];
                    const auto terms =
                        substitute(bilinear_terms(ra, rb, za, zb, nl));
                    const char *cls = class_name(classify_bilinear(ra, rb));
                    for (const OperatorTerm &t : terms) {
                        const cplx coeff =
                            kin * weight * static_cast<double>(c) *
                            t.prefactor;
                        as.add_term(as.angular_matrix(t.op),
                                    radial_factors(t, blocks), coeff);
                        ++term_count;
                        if (p.debug_provenance)
                            ++tally[std::string(cls) + ":" + t.coeff_label];
                    }
                }
            }
        }
    }
    return finish(as, basis, nl, p.n_omega, term_count, std::move(tally));
}

AssembledOperator assemble_magnetic(const LatticeTree &tree,
                                    const HamiltonianParams &p) {
    const RoleMap rm = role_map(tree, p.roles);
    const int nl = rm.n_rods;
    const BasisIndex basis = build_angular_basis(p, nl);
    const RadialGrid grid{p.n_omega};
    const RadialBlocks blocks = make_blocks(grid, p.stencil);
    const std::vector<LoopWord> words = plaquette_words(tree);

    Assembler as;
    as.init(basis, nl, p.n_omega);
    long term_count = 0;
    std::map<std::string, long> tally;

    const double mag = 1.0 / (2.0 * p.g * p.g * p.a);
    const long d = static_cast<long>(basis.dim());
    CplxSparse identity(d, d);
    identity.setIdentity();

    auto radial_profile = [&](const LoopWord &w, unsigned mask) {
        std::map<int, Eigen::VectorXd> per_rod;
        for (std::size_t i = 0; i < w.size(); ++i) {
            const int rod =
                rm.rod_of_kappa[static_cast<std::size_t>(w[i].kappa - 1)];
            Eigen::VectorXd f;
            if (mask & (1u << i)) {
                f = blocks.sin_half;
                if (w[i].dagger)
                    f = -f;
            } else {
                f = blocks.cos_half;
            }
            auto it = per_rod.find(rod);
            if (it == per_rod.end())
                per_rod.emplace(rod, std::move(f));
            else
                it->second = it->second.cwiseProduct(f);
        }
        Eigen::VectorXd radval = Eigen::VectorXd::Ones(as.rad_total);
        for (const auto &[rod, diag] : per_rod) {
            const long s = as.stride[static_cast<std::size_t>(rod)];
            for (long f = 0; f < as.rad_total; ++f)
                radval[f] *= diag[(f / s) % p.n_omega];
        }
        return radval;
    };

    for (const LoopWord &w : words) {
        const int k = static_cast<int>(w.size());
        if (k < 1 || k > 4)
            throw UnsupportedLoop(
                "loop words with more than four physical links are not "
                "representable");
        std::vector<int> rods(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            const auto kappa = w[static_cast<std::size_t>(i)].kappa;
            if (kappa < 1 || kappa > nl)
                throw RodUnknown("loop word names an unknown physical link");
            rods[static_cast<std::size_t>(i)] =
                rm.rod_of_kappa[static_cast<std::size_t>(kappa - 1)];
        }

        as.add_diagonal_term(identity, Eigen::VectorXd::Ones(as.rad_total),
                             cplx{4.0 * mag, 0.0});
        ++term_count;
        if (p.debug_provenance)
            ++tally["loop:const"];

        for (unsigned mask = 0; mask < (1u << k); ++mask) {
            const int ns = __builtin_popcount(mask);
            if (ns == 1)
                continue;
            std::vector<int> spos;
            for (int i = 0; i < k; ++i)
                if (mask & (1u << i))
                    spos.push_back(i);

            const cplx scale{-2.0 * mag, 0.0};
            if (ns == 0) {
                as.add_diagonal_term(identity, radial_profile(w, mask),
                                     scale * 2.0);
                ++term_count;
                if (p.debug_provenance)
                    ++tally["loop:cos"];
            } else if (ns == 2) {
                const int a = rods[static_cast<std::size_t>(spos[0])];
                const int b = rods[static_cast<std::size_t>(spos[1])];
                const CplxSparse &ang =
                    (a == b) ? identity
                             : as.angular_matrix(
                                   dot_id(std::min(a, b), std::max(a, b)));
                as.add_diagonal_term(ang, radial_profile(w, mask),
                                     scale * -2.0);
                ++term_count;
                if (p.debug_provenance)
                    ++tally["loop:dot"];
            } else if (ns == 3) {
                const SignedTriple st =
                    triple_id(rods[static_cast<std::size_t>(spos[0])],
                              rods[static_cast<std::size_t>(spos[1])],
                              rods[static_cast<std::size_t>(spos[2])]);
                if (st.sign == 0.0)
                    continue;
                as.add_diagonal_term(as.angular_matrix(st.id),
                                     radial_profile(w, mask),
                                     scale * -2.0 * st.sign);
                ++term_count;
                if (p.debug_provenance)
                    ++tally["loop:triple"];
            } else {
                auto dot_matrix = [&](int a, int b) -> CplxSparse {
                    if (a == b)
                        return identity;
                    return as.angular_matrix(
                        dot_id(std::min(a, b), std::max(a, b)));
                };
                const int r0 = rods[0];
                const int r1 = rods[1];
                const int r2 = rods[2];
                const int r3 = rods[3];
                CplxSparse combo =
                    CplxSparse(dot_matrix(r0, r1) * dot_matrix(r2, r3)) -
                    CplxSparse(dot_matrix(r0, r2) * dot_matrix(r1, r3)) +
                    CplxSparse(dot_matrix(r0, r3) * dot_matrix(r1, r2));
                as.add_diagonal_term(combo, radial_profile(w, mask),
                                     scale * 2.0);
                ++term_count;
                if (p.debug_provenance)
                    ++tally["loop:quad"];
            }
        }
    }
    return finish(as, basis, nl, p.n_omega, term_count, std::move(tally));
}

std::vector<double> spectrum(const CplxSparse &h, int k) {
    if (h.rows() != h.cols())
        throw InvalidQuery("spectrum needs a square matrix");
    if (h.rows() > 4096)
        throw TooLarge("dense spectrum is capped at dimension 4096");
    if (k < 1)
        throw InvalidQuery("at least one eigenvalue must be requested");
    Eigen::MatrixXcd dense(h);
    dense = 0.5 * (dense + dense.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
    if (es.info() != Eigen::Success)
        throw SpectrumFailed("dense eigensolve did not converge");
    const long take = std::min<long>(k, dense.rows());
    std::vector<double> out(static_cast<std::size_t>(take));
    for (long i = 0; i < take; ++i)
        out[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
    return out;
}

int degree_of_coupling(const AssembledOperator &op) {
    const long rt = op.radial_dim();
    int best = 0;
    for (int k = 0; k < op.matrix.outerSize(); ++k) {
        for (CplxSparse::InnerIterator it(op.matrix, k); it; ++it) {
            const long row = it.row();
            const long col = it.col();
            if (row == col)
                continue;
            long rrad = row % rt;
            long crad = col % rt;
            const AngularState &sa =
                op.angular.state(static_cast<std::size_t>(row / rt));
            const AngularState &sb =
                op.angular.state(static_cast<std::size_t>(col / rt));
            std::set<int> touched;
            for (int rod = 1; rod <= op.n_rods; ++rod) {
                if (rrad % op.n_omega != crad % op.n_omega)
                    touched.insert(rod);
                rrad /= op.n_omega;
                crad /= op.n_omega;
            }
            if (sa.n != sb.n)
                touched.insert(2);
            if (sa.L != sb.L || sa.M != sb.M || sa.N != sb.N)
                touched.insert(1);
            for (std::size_t r = 0; r < sa.rods.size(); ++r) {
                if (!(sa.rods[r] == sb.rods[r]))
                    touched.insert(static_cast<int>(r) + 3);
            }
            best = std::max(best, static_cast<int>(touched.size()));
        }
    }
    return best;
}

} // namespace smb
