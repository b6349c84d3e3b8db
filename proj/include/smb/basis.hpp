#pragma once

#include "smb/errors.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

namespace smb {

// Angular labels of one ordinary rod (every rod beyond the two that fix the
// body frame).
struct RodLabels {
    int l = 0;
    int m = 0;
    friend auto operator<=>(const RodLabels &, const RodLabels &) = default;
};

// Full angular label set of a basis state:
//   n         internal polar excitation between the two frame rods
//   rods[k]   (l,m) of rod k+3 (empty unless there are more than two rods)
//   L, M, N   total-charge multiplet labels
// sigma = N + sum of rod m values is derived, not free; |sigma| <= n always.
struct AngularState {
    int n = 0;
    std::vector<RodLabels> rods;
    int L = 0, M = 0, N = 0;
    int sigma = 0;

    int recompute_sigma() const {
        int s = N;
        for (const auto &r : rods) s += r.m;
        return s;
    }
    bool valid() const {
        if (n < 0 || L < 0 || std::abs(M) > L || std::abs(N) > L) return false;
        for (const auto &r : rods)
            if (r.l < 0 || std::abs(r.m) > r.l) return false;
        return std::abs(recompute_sigma()) <= n;
    }
    friend bool operator==(const AngularState &a, const AngularState &b) {
        return a.n == b.n && a.rods == b.rods && a.L == b.L && a.M == b.M &&
               a.N == b.N;
    }
    friend bool operator<(const AngularState &a, const AngularState &b) {
        if (a.n != b.n) return a.n < b.n;
        if (a.rods != b.rods) return a.rods < b.rods;
        if (a.L != b.L) return a.L < b.L;
        if (a.M != b.M) return a.M < b.M;
        return a.N < b.N;
    }
};

AngularState make_state(int n, std::vector<RodLabels> rods, int L, int M,
                        int N);

// Sector selection: L and M are always pinned (they are conserved exactly);
// N is dynamical within |N| <= L unless pinned.
struct Sector {
    int L = 0;
    int M = 0;
    std::optional<int> N;
};

struct Truncation {
    int l_max = 0;
    int n_max = 0;
    Sector sector;
};

// Ordered sector basis with O(1) lookup. Enumeration order is lexicographic
// in (n, (l3,m3), ..., (L,M,N)) and independent of construction path.
class BasisIndex {
  public:
    BasisIndex() = default;
    explicit BasisIndex(std::vector<AngularState> states);

    std::size_t dim() const { return states_.size(); }
    const AngularState &state(std::size_t i) const { return states_[i]; }
    const std::vector<AngularState> &states() const { return states_; }
    std::optional<std::size_t> find(const AngularState &s) const;

  private:
    std::vector<AngularState> states_;
    std::map<AngularState, std::size_t> lookup_;
};

// Enumerate every valid angular state for n_rods total rods (>= 2; rods
// beyond the second carry (l,m) labels) under the given truncation.
BasisIndex enumerate_states(int n_rods, const Truncation &t);

// Restrict an enumerated basis to one (L,M) block, optionally pinning N.
BasisIndex sector_project(const BasisIndex &basis, const Sector &sector);

} // namespace smb
