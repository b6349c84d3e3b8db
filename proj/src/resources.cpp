#include "smb/resources.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "smb/errors.hpp"

namespace smb {

namespace {

double spectral_norm_commutator(const Eigen::MatrixXcd &a,
                                const Eigen::MatrixXcd &b) {
    const Eigen::MatrixXcd comm = a * b - b * a;
    const Eigen::MatrixXcd herm =
        std::complex<double>{0.0, 1.0} * comm;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        0.5 * (herm + herm.adjoint().eval()), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw SpectrumFailed("commutator norm eigensolve did not converge");
    double peak = 0.0;
    for (long i = 0; i < es.eigenvalues().size(); ++i)
        peak = std::max(peak, std::abs(es.eigenvalues()[i]));
    return peak;
}

} // namespace

long count_terms(int n_links, BilinearClass c) {
    if (n_links < 2)
        throw InvalidQuery("term counting needs at least two physical links");
    const long nl = n_links;
    switch (c) {
    case BilinearClass::Rod1Rod1:
        return nl * (nl - 1) + 1;
    case BilinearClass::Rod2Rod2:
    case BilinearClass::MuMu:
        return 1;
    case BilinearClass::Rod1Rod2:
    case BilinearClass::Rod1Mu:
        return 3 * (2 * nl - 1);
    case BilinearClass::Rod2Mu:
    case BilinearClass::MuNu:
        return 27;
    }
    throw InvalidQuery("unknown bilinear class");
}

CountReport count_terms(int n_links) {
    if (n_links < 2)
        throw InvalidQuery("term counting needs at least two physical links");
    const long nl = n_links;
    CountReport r;
    r.breakdown["rod1.rod1"] = count_terms(n_links, BilinearClass::Rod1Rod1);
    r.breakdown["rod2.rod2"] = count_terms(n_links, BilinearClass::Rod2Rod2);
    r.breakdown["rod1.rod2"] = count_terms(n_links, BilinearClass::Rod1Rod2);
    r.breakdown["rod1.mu"] = count_terms(n_links, BilinearClass::Rod1Mu);
    r.breakdown["rod2.mu"] = count_terms(n_links, BilinearClass::Rod2Mu);
    r.breakdown["mu.mu"] = count_terms(n_links, BilinearClass::MuMu);
    r.breakdown["mu.nu"] = count_terms(n_links, BilinearClass::MuNu);
    r.n_electric = 4 * nl * nl;
    r.n_magnetic = 2 * nl;
    r.doc = doc_predicted(n_links);
    return r;
}

long count_magnetic_terms(const LatticeTree &tree) {
    long total = 0;
    for (const LoopWord &w : plaquette_words(tree)) {
        const long k = static_cast<long>(w.size());
        if (k < 1 || k > 4)
            throw UnsupportedLoop(
                "loop words with more than four physical links are not "
                "representable");
        total += 1;                        // all-cosine piece
        total += k * (k - 1) / 2;          // pair dot pieces
        total += k * (k - 1) * (k - 2) / 6; // triple pieces
        if (k == 4)
            total += 3;                    // double-dot pieces
    }
    return total;
}

int doc_predicted(int n_links) {
    if (n_links < 1)
        throw InvalidQuery("term counting needs at least one physical link");
    return std::min(n_links, 3);
}

long trotter_steps(const CostQuery &q) {
    if (q.p < 1)
        throw InvalidQuery("product-formula order must be at least 1");
    if (q.eps <= 0.0)
        throw InvalidQuery("target error must be positive");
    if (q.t < 0.0)
        throw InvalidQuery("evolution time must be non-negative");
    if (q.alpha_tilde < 0.0)
        throw InvalidQuery("non-commutativity parameter must be non-negative");
    const double inv_p = 1.0 / static_cast<double>(q.p);
    const double steps = std::pow(q.alpha_tilde, inv_p) *
                         std::pow(q.t, 1.0 + inv_p) / std::pow(q.eps, inv_p);
    if (steps <= 0.0)
        return 0;
    return static_cast<long>(
        std::ceil(steps - 1e-9 * (1.0 + std::abs(steps))));
}

AlphaTilde measure_alpha_tilde(const std::vector<CplxSparse> &terms, int p) {
    if (p < 1)
        throw InvalidQuery("product-formula order must be at least 1");
    AlphaTilde out;
    const std::size_t n = terms.size();
    if (n < 2)
        return out;
    long dim = terms.front().rows();
    for (const CplxSparse &t : terms) {
        if (t.rows() != dim || t.cols() != dim)
            throw InvalidQuery("commutator terms must share one dimension");
    }

    if (p == 1 && dim <= 2048) {
        std::vector<Eigen::MatrixXcd> dense;
        dense.reserve(n);
        for (const CplxSparse &t : terms)
            dense.emplace_back(t);
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                pairs.emplace_back(i, j);
        std::vector<double> norms(pairs.size(), 0.0);
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        const unsigned n_threads =
            static_cast<unsigned>(std::min<std::size_t>(hw, pairs.size()));
        std::atomic<std::size_t> cursor{0};
        auto worker = [&]() {
            for (;;) {
                const std::size_t k = cursor.fetch_add(1);
                if (k >= pairs.size())
                    return;
                norms[k] = spectral_norm_commutator(dense[pairs[k].first],
                                                    dense[pairs[k].second]);
            }
        };
        std::vector<std::thread> pool;
        for (unsigned i = 0; i + 1 < n_threads; ++i)
            pool.emplace_back(worker);
        worker();
        for (std::thread &th : pool)
            th.join();
        for (double v : norms)
            out.value += 2.0 * v;
        return out;
    }

    out.bound_only = true;
    std::vector<double> f;
    f.reserve(n);
    double sum = 0.0;
    double sum_pow = 0.0;
    for (const CplxSparse &t : terms) {
        const double nf = t.norm();
        f.push_back(nf);
        sum += nf;
        sum_pow += std::pow(nf, p + 1);
    }
    out.value = std::pow(2.0, p) * (std::pow(sum, p + 1) - sum_pow);
    return out;
}

double qsp_gate_envelope(const CostQuery &q) {
    if (q.n_links < 1)
        throw InvalidQuery("gate envelope needs at least one physical link");
    if (q.eps <= 0.0 || q.eps > 1.0)
        throw InvalidQuery("target error must lie in (0, 1]");
    if (q.t < 0.0)
        throw InvalidQuery("evolution time must be non-negative");
    const double nl = q.n_links;
    return nl * nl * std::log(nl) * (nl * nl * q.t + std::log(1.0 / q.eps));
}

} // namespace smb
