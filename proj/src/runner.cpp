#include "smb/runner.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include "smb/errors.hpp"
#include "smb/exports.hpp"
#include "smb/frames.hpp"
#include "smb/hamiltonian.hpp"
#include "smb/oracle.hpp"
#include "smb/resources.hpp"

namespace smb {

namespace {

constexpr unsigned kSweepSeed = 0x5eed2026u;

struct Worst {
    double value = 0.0;
    std::string label;
    void track(double v, const std::string &l) {
        if (v > value) {
            value = v;
            label = l;
        }
    }
    void merge(const Worst &o) { track(o.value, o.label); }
};

std::string normalize_command(std::string cmd) {
    for (char &c : cmd)
        if (c == ' ' || c == '_' || c == '.')
            c = '-';
    return cmd;
}

int thread_budget(const RunConfig &c) {
    if (c.threads > 0)
        return c.threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

template <typename Fn>
void parallel_over(std::size_t count, int threads, const Fn &fn) {
    const int n = std::max(
        1, std::min<int>(threads, static_cast<int>(std::min<std::size_t>(
                                      count, 64))));
    if (n == 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i, 0);
        return;
    }
    std::atomic<std::size_t> cursor{0};
    auto worker = [&](int tid) {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= count)
                return;
            fn(i, tid);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t)
        pool.emplace_back(worker, t);
    worker(0);
    for (std::thread &th : pool)
        th.join();
}

// ---------------------------------------------------------------------------
// frame identity sweep

struct SeqCoords {
    double alpha = 0, beta = 0, gamma = 0, Theta = 0;
    std::vector<double> th, ph;
};

SeqCoords to_seq(const OriginalAngles &o) {
    auto [e, b] = original_to_sequestered(o);
    SeqCoords s;
    s.alpha = e.alpha;
    s.beta = e.beta;
    s.gamma = e.gamma;
    s.Theta = b.Theta;
    for (const auto &r : b.rods) {
        s.th.push_back(r[0]);
        s.ph.push_back(r[1]);
    }
    return s;
}

double probe_fn(const SeqCoords &s) {
    double v = std::sin(s.beta) * std::cos(s.alpha) +
               std::cos(s.beta) * std::sin(s.gamma) +
               std::sin(s.Theta) * std::cos(s.gamma) + 1.5 * std::cos(s.Theta);
    for (std::size_t m = 0; m < s.th.size(); ++m) {
        const double w = 2.0 + static_cast<double>(m);
        v += w * (std::cos(s.th[m]) +
                  std::sin(s.th[m]) * std::sin(s.ph[m] - s.gamma));
    }
    return v;
}

struct ProbePartials {
    double da = 0, db = 0, dg = 0, dT = 0;
    std::vector<double> dth, dph;
};

ProbePartials probe_partials(const SeqCoords &s) {
    ProbePartials p;
    p.da = -std::sin(s.beta) * std::sin(s.alpha);
    p.db = std::cos(s.beta) * std::cos(s.alpha) -
           std::sin(s.beta) * std::sin(s.gamma);
    p.dg = std::cos(s.beta) * std::cos(s.gamma) -
           std::sin(s.Theta) * std::sin(s.gamma);
    p.dT = std::cos(s.Theta) * std::cos(s.gamma) - 1.5 * std::sin(s.Theta);
    for (std::size_t m = 0; m < s.th.size(); ++m) {
        const double w = 2.0 + static_cast<double>(m);
        p.dg -= w * std::sin(s.th[m]) * std::cos(s.ph[m] - s.gamma);
        p.dth.push_back(
            w * (-std::sin(s.th[m]) +
                 std::cos(s.th[m]) * std::sin(s.ph[m] - s.gamma)));
        p.dph.push_back(w * std::sin(s.th[m]) *
                        std::cos(s.ph[m] - s.gamma));
    }
    return p;
}

double fd_probe(const OriginalAngles &o, int rod, int which) {
    const double h = 1e-3;
    static const double c[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0,
                                -1.0 / 280.0};
    double acc = 0.0;
    for (int k = 1; k <= 4; ++k) {
        OriginalAngles op = o, om = o;
        op.rods[static_cast<std::size_t>(rod)][static_cast<std::size_t>(
            which)] += k * h;
        om.rods[static_cast<std::size_t>(rod)][static_cast<std::size_t>(
            which)] -= k * h;
        acc += c[k - 1] * (probe_fn(to_seq(op)) - probe_fn(to_seq(om))) / h;
    }
    return acc;
}

// The six lab-to-body derivative conversion rules evaluated on the probe
// function; rule index order: rod 1 polar/azimuth, rod 2 polar/azimuth,
// ordinary rod polar/azimuth.
void check_chain_rules(const OriginalAngles &o, const SeqCoords &s,
                       Worst &worst) {
    const ProbePartials p = probe_partials(s);
    const double sb = std::sin(s.beta), cb = std::cos(s.beta);
    const double sg = std::sin(s.gamma), cg = std::cos(s.gamma);
    const double cT = std::cos(s.Theta) / std::sin(s.Theta);
    const double iT = 1.0 / std::sin(s.Theta);
    double sum_dph = 0.0;
    for (double v : p.dph)
        sum_dph += v;

    double r1t = p.db + sg * cT * p.dg - cg * p.dT;
    double r1p = p.da - (cb + sb * cg * cT) * p.dg - sb * sg * p.dT;
    for (std::size_t m = 0; m < s.th.size(); ++m) {
        const double sp = std::sin(s.ph[m]), cp = std::cos(s.ph[m]);
        const double ct = std::cos(s.th[m]) / std::sin(s.th[m]);
        r1t += (sg * sp - cg * cp) * p.dth[m];
        r1t += (-sg * cT + ct * (sg * cp + cg * sp)) * p.dph[m];
        r1p += -sb * (sg * cp + cg * sp) * p.dth[m];
        r1p += sb * (cg * cT + ct * (sg * sp - cg * cp)) * p.dph[m];
    }
    worst.track(std::abs(r1t - fd_probe(o, 0, 0)), "conversion rod1 polar");
    worst.track(std::abs(r1p - fd_probe(o, 0, 1)), "conversion rod1 azimuth");

    const double st2 = std::sin(o.rods[1][0]);
    const double r2t =
        (sb * cg * std::cos(s.Theta) + cb * std::sin(s.Theta)) / st2 * p.dT -
        sb * sg * iT / st2 * (p.dg - sum_dph);
    const double r2p =
        sb * sg * p.dT + (cb + sb * cg * cT) * (p.dg - sum_dph);
    worst.track(std::abs(r2t - fd_probe(o, 1, 0)), "conversion rod2 polar");
    worst.track(std::abs(r2p - fd_probe(o, 1, 1)), "conversion rod2 azimuth");

    for (std::size_t m = 0; m < s.th.size(); ++m) {
        const double stm = std::sin(o.rods[m + 2][0]);
        const double sp = std::sin(s.ph[m]), cp = std::cos(s.ph[m]);
        const double ctm = std::cos(s.th[m]) / std::sin(s.th[m]);
        const double rmt =
            (cb * std::sin(s.th[m]) +
             sb * std::cos(s.th[m]) * (cg * cp - sg * sp)) /
                stm * p.dth[m] -
            sb / std::sin(s.th[m]) * (sg * cp + cg * sp) / stm * p.dph[m];
        const double rmp =
            sb * (sg * cp + cg * sp) * p.dth[m] +
            (cb + sb * ctm * (cg * cp - sg * sp)) * p.dph[m];
        worst.track(std::abs(rmt - fd_probe(o, static_cast<int>(m) + 2, 0)),
                    "conversion ordinary polar");
        worst.track(std::abs(rmp - fd_probe(o, static_cast<int>(m) + 2, 1)),
                    "conversion ordinary azimuth");
    }
}

void check_one_frame(const OriginalAngles &o, bool with_chain,
                     Worst &closed, Worst &chain) {
    SeqCoords s;
    try {
        s = to_seq(o);
    } catch (const FrameDegenerate &) {
        return;
    }
    auto [e, b] = original_to_sequestered(o);
    const Eigen::Matrix3d rot = rotation_matrix(e);
    const int nr = o.rod_count();
    std::vector<Eigen::Vector3d> lab(static_cast<std::size_t>(nr));
    for (int k = 1; k <= nr; ++k) {
        lab[static_cast<std::size_t>(k - 1)] = lab_direction(o, k);
        const Eigen::Vector3d back = rot * body_direction(b, k);
        closed.track(
            (back - lab[static_cast<std::size_t>(k - 1)]).cwiseAbs().maxCoeff(),
            "roundtrip rod " + std::to_string(k));
    }
    for (int i = 1; i <= nr; ++i) {
        for (int j = i + 1; j <= nr; ++j) {
            const double ref = lab[static_cast<std::size_t>(i - 1)].dot(
                lab[static_cast<std::size_t>(j - 1)]);
            closed.track(std::abs(pair_dot(b, i, j) - ref),
                         "dot " + std::to_string(i) + "," + std::to_string(j));
            for (int k = j + 1; k <= nr; ++k) {
                const double tref = lab[static_cast<std::size_t>(i - 1)].dot(
                    lab[static_cast<std::size_t>(j - 1)].cross(
                        lab[static_cast<std::size_t>(k - 1)]));
                const double tv = pair_triple(b, i, j, k);
                closed.track(std::abs(tv - tref),
                             "triple " + std::to_string(i) + "," +
                                 std::to_string(j) + "," + std::to_string(k));
                closed.track(std::abs(pair_triple(b, j, k, i) - tv),
                             "triple cyclic");
                closed.track(std::abs(pair_triple(b, k, i, j) - tv),
                             "triple cyclic");
            }
        }
    }
    if (with_chain) {
        bool safe = std::abs(std::sin(s.beta)) > 0.3 &&
                    std::abs(std::sin(s.Theta)) > 0.3;
        for (double t : s.th)
            safe = safe && std::abs(std::sin(t)) > 0.3;
        if (safe)
            check_chain_rules(o, s, chain);
    }
}

int cmd_check_frames(const RunConfig &c, std::ostream &out) {
    const int n_cfg = 10000;
    std::mt19937_64 rng(kSweepSeed);
    std::uniform_real_distribution<double> upol(0.2, M_PI - 0.2);
    std::uniform_real_distribution<double> uaz(0.0, 2.0 * M_PI);

    std::vector<OriginalAngles> configs;
    configs.reserve(static_cast<std::size_t>(n_cfg));
    while (configs.size() < static_cast<std::size_t>(n_cfg)) {
        OriginalAngles o;
        const int nr = 3 + static_cast<int>(configs.size() % 3);
        o.rods.resize(static_cast<std::size_t>(nr));
        for (auto &r : o.rods) {
            r[0] = upol(rng);
            r[1] = uaz(rng);
        }
        configs.push_back(std::move(o));
    }

    const int threads = thread_budget(c);
    std::vector<Worst> closed_parts(64), chain_parts(64);
    parallel_over(configs.size(), threads, [&](std::size_t i, int tid) {
        check_one_frame(configs[i], i % 20 == 0,
                        closed_parts[static_cast<std::size_t>(tid)],
                        chain_parts[static_cast<std::size_t>(tid)]);
    });
    Worst closed, chain;
    for (const Worst &w : closed_parts)
        closed.merge(w);
    for (const Worst &w : chain_parts)
        chain.merge(w);

    const double chain_tol = 1e-6;
    out << "check frames: " << n_cfg << " random configurations\n";
    out << "  closed-form worst  " << std::scientific << std::setprecision(3)
        << closed.value << "  (" << closed.label << "), tolerance "
        << c.tolerance << "\n";
    out << "  chain-rule worst   " << chain.value << "  (" << chain.label
        << "), tolerance " << chain_tol << "\n";
    const bool pass = closed.value <= c.tolerance && chain.value <= chain_tol;
    out << (pass ? "PASS" : "FAIL") << " check frames\n";
    if (!pass)
        out << "error CheckFailed: worst offender "
            << (closed.value > c.tolerance ? closed.label : chain.label)
            << "\n";
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// oracle self-checks

AngularState three_rod_state(int n, int l, int m, int L, int M, int N) {
    return make_state(n, {{l, m}}, L, M, N);
}

int cmd_check_oracle(const RunConfig &c, std::ostream &out) {
    Worst worst;
    const double sq2 = std::sqrt(0.5);
    worst.track(std::abs(alp_normalized(0, 0, 0.3) - sq2),
                "legendre tower seed");
    worst.track(std::abs(sph_harm(1, 0, 0.0, 0.0).real() -
                         std::sqrt(3.0 / (4.0 * M_PI))),
                "harmonic north pole");
    worst.track(std::abs(euler_factor(0, 0, 0, 0.4, 1.1, 2.2) -
                         std::complex<double>(1.0 / std::sqrt(8.0 * M_PI *
                                                              M_PI))),
                "rotation scalar factor");

    // polar tower eigen-residual by central differences
    for (int l = 1; l <= 4; ++l) {
        for (int m = 0; m <= std::min(l, 2); ++m) {
            const double th = 1.1;
            const double h = 1e-4;
            auto f = [&](double t) {
                return alp_normalized(l, m, std::cos(t));
            };
            const double d2 = (f(th + h) - 2.0 * f(th) + f(th - h)) / (h * h);
            const double d1 = (f(th + h) - f(th - h)) / (2.0 * h);
            const double res = -d2 - d1 * std::cos(th) / std::sin(th) +
                               m * m / (std::sin(th) * std::sin(th)) * f(th) -
                               l * (l + 1.0) * f(th);
            worst.track(std::abs(res) / (1.0 + std::abs(f(th))),
                        "tower eigen residual l=" + std::to_string(l));
        }
    }

    QuadratureSpec q;
    q.polar_nodes = 48;
    const AngularState ket = three_rod_state(1, 0, 0, 0, 0, 0);
    worst.track(std::abs(quadrature_matrix_element(
                             {AngKind::Identity}, ket, ket, q) -
                         std::complex<double>(1.0)),
                "tower normalization");
    worst.track(std::abs(quadrature_matrix_element(
                             {AngKind::InternalCasimir}, ket, ket, q) -
                         std::complex<double>(2.0)),
                "tower quadratic weight");

    std::vector<AngularState> states;
    for (int n = 0; n <= 1; ++n)
        for (int l = 0; l <= 1; ++l)
            for (int m = -l; m <= l; ++m) {
                AngularState s;
                try {
                    s = three_rod_state(n, l, m, 1, 0, -m);
                } catch (const InvalidQuantumNumber &) {
                    continue;
                }
                if (std::abs(s.sigma) <= s.n)
                    states.push_back(s);
            }
    const Eigen::MatrixXcd g = gram_matrix(states, q);
    const Eigen::MatrixXcd delta =
        g - Eigen::MatrixXcd::Identity(g.rows(), g.cols());
    worst.track(delta.cwiseAbs().maxCoeff(),
                "small sector orthonormality (" + std::to_string(g.rows()) +
                    " states)");

    const double tol = std::max(c.tolerance, 1e-6);
    out << "check oracle: worst deviation " << std::scientific
        << std::setprecision(3) << worst.value << " (" << worst.label
        << "), tolerance " << tol << "\n";
    const bool pass = worst.value <= tol;
    out << (pass ? "PASS" : "FAIL") << " check oracle\n";
    if (!pass)
        out << "error CheckFailed: worst offender " << worst.label << "\n";
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// counting checks

int cmd_check_counts(const RunConfig &c, std::ostream &out) {
    const std::array<std::pair<BilinearClass, const char *>, 7> classes{{
        {BilinearClass::Rod1Rod1, "rod1.rod1"},
        {BilinearClass::Rod2Rod2, "rod2.rod2"},
        {BilinearClass::MuMu, "mu.mu"},
        {BilinearClass::Rod1Rod2, "rod1.rod2"},
        {BilinearClass::Rod1Mu, "rod1.mu"},
        {BilinearClass::Rod2Mu, "rod2.mu"},
        {BilinearClass::MuNu, "mu.nu"},
    }};
    bool pass = true;
    out << "check counts: closed-form class counts vs measured signatures\n";
    for (int nl = 2; nl <= 8; ++nl) {
        for (const auto &[cls, name] : classes) {
            long expected = 0;
            int measured = 0;
            bool available = true;
            try {
                expected = count_terms(nl, cls);
                measured = term_class_count(cls, nl);
            } catch (const InvalidQuery &) {
                available = false;
            }
            if (!available)
                continue;
            const bool ok = expected == measured;
            pass = pass && ok;
            if (!ok)
                out << "  MISMATCH n_links=" << nl << " " << name
                    << " expected " << expected << " measured " << measured
                    << "\n";
        }
    }
    out << "  classes swept for 2..8 links\n";
    try {
        const LatticeTree tree = build_lattice(c);
        out << "  configured lattice: " << tree.n_physical()
            << " physical links, magnetic terms "
            << count_magnetic_terms(tree) << "\n";
    } catch (const Error &e) {
        out << "  configured lattice skipped: " << e.what() << "\n";
    }
    out << (pass ? "PASS" : "FAIL") << " check counts\n";
    if (!pass)
        out << "error CheckFailed: measured signature counts disagree with "
               "the closed forms\n";
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// assembly-backed commands

BasisIndex runner_basis(const RunConfig &c, const LatticeTree &tree) {
    const HamiltonianParams p = hamiltonian_params(c);
    const int nl = tree.n_physical();
    if (nl == 1) {
        AngularState scalar;
        return BasisIndex({scalar});
    }
    if (p.pin_sector)
        return enumerate_states(nl, p.truncation);
    std::vector<AngularState> all;
    Truncation block = p.truncation;
    block.sector.N.reset();
    for (int L = 0; L <= p.truncation.l_max; ++L) {
        for (int M = -L; M <= L; ++M) {
            block.sector.L = L;
            block.sector.M = M;
            try {
                const BasisIndex b = enumerate_states(nl, block);
                all.insert(all.end(), b.states().begin(), b.states().end());
            } catch (const SectorEmpty &) {
            }
        }
    }
    if (all.empty())
        throw SectorEmpty("no states below the truncation in any block");
    return BasisIndex(all);
}

void report_operator(std::ostream &out, const char *which,
                     const AssembledOperator &op) {
    out << which << ": dim " << op.dim() << " (radial " << op.radial_dim()
        << " x angular " << op.angular.dim() << "), nnz "
        << op.matrix.nonZeros() << "\n";
    out << "  norm " << std::scientific << std::setprecision(6)
        << op.report.matrix_norm << ", hermiticity defect "
        << op.report.asymmetry_norm << ", terms " << op.report.term_count
        << "\n";
    for (const auto &[key, count] : op.report.term_tally)
        out << "    " << key << " x" << count << "\n";
}

int cmd_build(const RunConfig &c, std::ostream &out) {
    const LatticeTree tree = build_lattice(c);
    const HamiltonianParams p = hamiltonian_params(c);
    out << "lattice: " << tree.n_vertices() << " vertices, " << tree.n_links()
        << " links, " << tree.n_physical() << " physical\n";
    const AssembledOperator he = assemble_electric(tree, p);
    report_operator(out, "electric", he);
    const AssembledOperator hb = assemble_magnetic(tree, p);
    report_operator(out, "magnetic", hb);
    out << "PASS build\n";
    return 0;
}

int cmd_export_basis(const RunConfig &c, std::ostream &out) {
    const LatticeTree tree = build_lattice(c);
    const BasisIndex basis = runner_basis(c, tree);
    const std::string path = c.out_dir + "/basis.tsv";
    write_file(path, basis_table(basis));
    out << "wrote " << path << " (" << basis.dim() << " states)\n";
    return 0;
}

int cmd_export_matrix(const RunConfig &c, std::ostream &out) {
    const LatticeTree tree = build_lattice(c);
    const HamiltonianParams p = hamiltonian_params(c);
    const AssembledOperator he = assemble_electric(tree, p);
    const AssembledOperator hb = assemble_magnetic(tree, p);
    const std::string etext = to_matrix_market(he.matrix);
    const std::string btext = to_matrix_market(hb.matrix);
    write_file(c.out_dir + "/electric.mtx", etext);
    write_file(c.out_dir + "/electric.meta.json",
               matrix_metadata(c, he, etext, "electric"));
    write_file(c.out_dir + "/magnetic.mtx", btext);
    write_file(c.out_dir + "/magnetic.meta.json",
               matrix_metadata(c, hb, btext, "magnetic"));
    out << "wrote " << c.out_dir << "/electric.mtx (nnz "
        << he.matrix.nonZeros() << ") and " << c.out_dir
        << "/magnetic.mtx (nnz " << hb.matrix.nonZeros() << ")\n";
    return 0;
}

int cmd_export_catalog(const RunConfig &c, std::ostream &out) {
    const LatticeTree tree = build_lattice(c);
    const int nl = tree.n_physical();
    if (nl < 2)
        throw InvalidQuery(
            "the operator catalog needs at least two physical links");
    const std::string path = c.out_dir + "/catalog.json";
    write_file(path, catalog_table(nl));
    out << "wrote " << path << "\n";
    return 0;
}

int cmd_spectrum(const RunConfig &c, std::ostream &out) {
    const LatticeTree tree = build_lattice(c);
    const HamiltonianParams p = hamiltonian_params(c);
    const AssembledOperator he = assemble_electric(tree, p);
    const AssembledOperator hb = assemble_magnetic(tree, p);
    const CplxSparse h = he.matrix + hb.matrix;
    const std::vector<double> evs = spectrum(h, 5);
    out << "lowest eigenvalues (dim " << he.dim() << "):\n";
    out << std::setprecision(12) << std::fixed;
    for (std::size_t i = 0; i < evs.size(); ++i)
        out << "  E" << i << " = " << evs[i] << "\n";
    return 0;
}

int cmd_resources(const RunConfig &c, std::ostream &out) {
    const LatticeTree tree = build_lattice(c);
    const int nl = tree.n_physical();
    out << "resource accounting (unit-constant envelopes)\n";
    out << "  physical links: " << nl << "\n";
    if (nl >= 2) {
        const CountReport r = count_terms(nl);
        out << "  electric bilinears (dense table): " << r.n_electric << "\n";
        out << "  expansion terms per bilinear class:\n";
        for (const auto &[key, v] : r.breakdown)
            out << "    " << key << ": " << v << "\n";
        out << "  degree of coupling: " << r.doc << "\n";
    } else {
        out << "  electric bilinears: 1 (single-link reduction)\n";
        out << "  degree of coupling: " << doc_predicted(nl) << "\n";
    }
    out << "  magnetic trace terms: " << count_magnetic_terms(tree) << "\n";
    CostQuery q;
    q.n_links = nl;
    out << "  trotter steps envelope (p=1, t=1, eps=1e-2, alpha=1): "
        << trotter_steps(q) << "\n";
    if (nl >= 2)
        out << "  qsp gate envelope (t=1, eps=1e-2): " << std::scientific
            << std::setprecision(6) << qsp_gate_envelope(q) << "\n";
    return 0;
}

} // namespace

int run(const RunOptions &opt, std::ostream &out) {
    try {
        const std::string cmd = normalize_command(opt.command);
        if (opt.config_path.empty())
            throw ConfigError("a config file is required (--config)");
        RunConfig c = load_config(opt.config_path);
        if (!opt.out_dir.empty())
            c.out_dir = opt.out_dir;
        if (opt.tolerance >= 0.0)
            c.tolerance = opt.tolerance;
        if (opt.threads >= 0)
            c.threads = opt.threads;
        c.debug_provenance = c.debug_provenance || opt.debug_provenance;

        if (cmd == "build")
            return cmd_build(c, out);
        if (cmd == "check-frames")
            return cmd_check_frames(c, out);
        if (cmd == "check-oracle")
            return cmd_check_oracle(c, out);
        if (cmd == "check-counts")
            return cmd_check_counts(c, out);
        if (cmd == "export-basis")
            return cmd_export_basis(c, out);
        if (cmd == "export-matrix")
            return cmd_export_matrix(c, out);
        if (cmd == "export-catalog")
            return cmd_export_catalog(c, out);
        if (cmd == "spectrum")
            return cmd_spectrum(c, out);
        if (cmd == "resources")
            return cmd_resources(c, out);
        throw InvalidQuery("unknown command " + cmd);
    } catch (const Error &e) {
        out << "error " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        out << "error unexpected: " << e.what() << "\n";
        return 2;
    }
}

} // namespace smb
