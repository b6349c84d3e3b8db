#include "smb/basis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace smb {

AngularState make_state(int n, std::vector<RodLabels> rods, int L, int M,
                        int N) {
    AngularState s;
    s.n = n;
    s.rods = std::move(rods);
    s.L = L;
    s.M = M;
    s.N = N;
    s.sigma = s.recompute_sigma();
    if (!s.valid())
        throw InvalidQuantumNumber(
            "state (n=" + std::to_string(n) + ", L=" + std::to_string(L) +
            ", M=" + std::to_string(M) + ", N=" + std::to_string(N) +
            ") violates label constraints");
    return s;
}

BasisIndex::BasisIndex(std::vector<AngularState> states)
    : states_(std::move(states)) {
    std::sort(states_.begin(), states_.end());
    for (std::size_t i = 0; i < states_.size(); ++i)
        lookup_.emplace(states_[i], i);
}

std::optional<std::size_t> BasisIndex::find(const AngularState &s) const {
    auto it = lookup_.find(s);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
}

namespace {

void enumerate_rods(int rod_count, int l_max, std::vector<RodLabels> &scratch,
                    const std::function<void(const std::vector<RodLabels> &)> &emit) {
    if (static_cast<int>(scratch.size()) == rod_count) {
        emit(scratch);
        return;
    }
    for (int l = 0; l <= l_max; ++l)
        for (int m = -l; m <= l; ++m) {
            scratch.push_back({l, m});
            enumerate_rods(rod_count, l_max, scratch, emit);
            scratch.pop_back();
        }
}

} // namespace

BasisIndex enumerate_states(int n_rods, const Truncation &t) {
    if (n_rods < 2)
        throw InvalidQuantumNumber("need at least two rods, got " +
                                   std::to_string(n_rods));
    const Sector &sec = t.sector;
    if (sec.L < 0 || std::abs(sec.M) > sec.L)
        throw SectorEmpty("sector (L=" + std::to_string(sec.L) +
                          ", M=" + std::to_string(sec.M) + ") is inconsistent");
    if (sec.N && std::abs(*sec.N) > sec.L)
        throw SectorEmpty("pinned N=" + std::to_string(*sec.N) +
                          " exceeds L=" + std::to_string(sec.L));

    std::vector<int> n_values;
    if (sec.N)
        n_values = {*sec.N};
    else
        for (int N = -sec.L; N <= sec.L; ++N) n_values.push_back(N);

    std::vector<AngularState> out;
    std::vector<RodLabels> scratch;
    enumerate_rods(n_rods - 2, t.l_max, scratch,
                   [&](const std::vector<RodLabels> &rods) {
                       for (int N : n_values) {
                           int sigma = N;
                           for (const auto &r : rods) sigma += r.m;
                           for (int n = std::abs(sigma); n <= t.n_max; ++n) {
                               AngularState s;
                               s.n = n;
                               s.rods = rods;
                               s.L = sec.L;
                               s.M = sec.M;
                               s.N = N;
                               s.sigma = sigma;
                               out.push_back(std::move(s));
                           }
                       }
                   });
    if (out.empty())
        throw SectorEmpty("no state satisfies the truncation in sector (L=" +
                          std::to_string(sec.L) + ", M=" +
                          std::to_string(sec.M) + ")");
    return BasisIndex(std::move(out));
}

BasisIndex sector_project(const BasisIndex &basis, const Sector &sector) {
    std::vector<AngularState> kept;
    for (const auto &s : basis.states()) {
        if (s.L != sector.L || s.M != sector.M) continue;
        if (sector.N && s.N != *sector.N) continue;
        kept.push_back(s);
    }
    if (kept.empty())
        throw SectorEmpty("projection onto (L=" + std::to_string(sector.L) +
                          ", M=" + std::to_string(sector.M) +
                          ") removed every state");
    return BasisIndex(std::move(kept));
}

} // namespace smb
