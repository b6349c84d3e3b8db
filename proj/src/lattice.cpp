#include "smb/lattice.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>
#include <string>

namespace smb {

namespace {

int ndims(const LatticeSpec &spec) { return static_cast<int>(spec.dims.size()); }

void validate_spec(const LatticeSpec &spec) {
    if (spec.dims.empty() || spec.dims.size() > 3)
        throw TreeInvalid("lattice must have one to three dimensions");
    if (spec.periodic.size() != spec.dims.size())
        throw TreeInvalid("periodic flags must match dimension count");
    for (std::size_t d = 0; d < spec.dims.size(); ++d) {
        if (spec.dims[d] < 1)
            throw TreeInvalid("dimension extent must be positive");
        if (spec.periodic[d] && spec.dims[d] < 2)
            throw TreeInvalid("periodic dimension needs extent >= 2");
    }
}

int vertex_id(const LatticeSpec &spec, const std::vector<int> &coords) {
    int id = 0, stride = 1;
    for (int d = 0; d < ndims(spec); ++d) {
        id += coords[d] * stride;
        stride *= spec.dims[d];
    }
    return id;
}

std::vector<int> vertex_coords(const LatticeSpec &spec, int id) {
    std::vector<int> c(ndims(spec));
    for (int d = 0; d < ndims(spec); ++d) {
        c[d] = id % spec.dims[d];
        id /= spec.dims[d];
    }
    return c;
}

// Neighbor of v one step along +dim, or nullopt at an open boundary.
std::optional<int> step(const LatticeSpec &spec, int v, int dim) {
    auto c = vertex_coords(spec, v);
    if (c[dim] + 1 < spec.dims[dim]) {
        ++c[dim];
        return vertex_id(spec, c);
    }
    if (spec.periodic[dim]) {
        c[dim] = 0;
        return vertex_id(spec, c);
    }
    return std::nullopt;
}

std::vector<LatticeLink> enumerate_links(const LatticeSpec &spec) {
    int n_vert = 1;
    for (int d : spec.dims) n_vert *= d;
    std::vector<LatticeLink> links;
    for (int v = 0; v < n_vert; ++v)
        for (int d = 0; d < ndims(spec); ++d)
            if (auto w = step(spec, v, d))
                links.push_back({v, *w, d});
    return links;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

void finish_tree(LatticeTree &tree) {
    int n_vert = 1;
    for (int d : tree.spec.dims) n_vert *= d;

    std::vector<bool> on_tree(tree.links.size(), false);
    for (int id : tree.tree_links) on_tree[id] = true;
    for (int id = 0; id < tree.n_links(); ++id)
        if (!on_tree[id]) tree.physical_links.push_back(id);

    // Tree paths from the origin by breadth-first traversal over tree links.
    std::vector<std::vector<std::pair<int, int>>> adjacency(n_vert);
    for (int id : tree.tree_links) {
        adjacency[tree.links[id].tail].push_back({id, +1});
        adjacency[tree.links[id].head].push_back({id, -1});
    }
    tree.paths.assign(n_vert, {});
    std::vector<bool> seen(n_vert, false);
    std::vector<int> frontier{tree.origin};
    seen[tree.origin] = true;
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int v : frontier)
            for (auto [id, dir] : adjacency[v]) {
                const int w = dir > 0 ? tree.links[id].head : tree.links[id].tail;
                if (seen[w]) continue;
                seen[w] = true;
                tree.paths[w] = tree.paths[v];
                tree.paths[w].push_back({id, dir});
                next.push_back(w);
            }
        frontier = std::move(next);
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
        throw TreeInvalid("tree does not span the lattice");
}

} // namespace

bool LatticeTree::is_tree_link(int link_id) const {
    return std::binary_search(tree_links.begin(), tree_links.end(), link_id);
}

std::optional<int> LatticeTree::kappa_of(int link_id) const {
    auto it =
        std::lower_bound(physical_links.begin(), physical_links.end(), link_id);
    if (it == physical_links.end() || *it != link_id) return std::nullopt;
    return static_cast<int>(it - physical_links.begin()) + 1;
}

LatticeTree build_maximal_tree(const LatticeSpec &spec,
                               TreeConvention convention) {
    validate_spec(spec);
    (void)convention;
    LatticeTree tree;
    tree.spec = spec;
    tree.links = enumerate_links(spec);
    tree.origin = 0;

    // Link lookup (tail, dim) -> id for the depth-first walk.
    std::map<std::pair<int, int>, int> by_tail_dim;
    for (int id = 0; id < tree.n_links(); ++id)
        by_tail_dim[{tree.links[id].tail, tree.links[id].dim}] = id;

    int n_vert = 1;
    for (int d : spec.dims) n_vert *= d;
    std::vector<bool> visited(n_vert, false);
    visited[tree.origin] = true;
    // Depth-first comb: from each vertex extend along dimension 1 first,
    // then 2, then 3, always in the positive direction.
    std::function<void(int)> dfs = [&](int v) {
        for (int d = 0; d < ndims(spec); ++d) {
            auto w = step(spec, v, d);
            if (!w || visited[*w]) continue;
            visited[*w] = true;
            tree.tree_links.push_back(by_tail_dim.at({v, d}));
            dfs(*w);
        }
    };
    dfs(tree.origin);
    std::sort(tree.tree_links.begin(), tree.tree_links.end());
    finish_tree(tree);
    return tree;
}

LatticeTree build_maximal_tree(const LatticeSpec &spec,
                               const std::vector<int> &tree_link_ids) {
    validate_spec(spec);
    LatticeTree tree;
    tree.spec = spec;
    tree.links = enumerate_links(spec);
    tree.origin = 0;

    int n_vert = 1;
    for (int d : spec.dims) n_vert *= d;
    if (static_cast<int>(tree_link_ids.size()) != n_vert - 1)
        throw TreeInvalid("spanning tree needs exactly " +
                          std::to_string(n_vert - 1) + " links, got " +
                          std::to_string(tree_link_ids.size()));
    UnionFind uf(n_vert);
    for (int id : tree_link_ids) {
        if (id < 0 || id >= tree.n_links())
            throw TreeInvalid("link id " + std::to_string(id) +
                              " out of range");
        if (!uf.unite(tree.links[id].tail, tree.links[id].head))
            throw TreeInvalid("tree links contain a cycle at link " +
                              std::to_string(id));
    }
    tree.tree_links = tree_link_ids;
    std::sort(tree.tree_links.begin(), tree.tree_links.end());
    if (std::adjacent_find(tree.tree_links.begin(), tree.tree_links.end()) !=
        tree.tree_links.end())
        throw TreeInvalid("duplicate tree link");
    finish_tree(tree);
    return tree;
}

TransportSets transport_sets(const LatticeTree &tree, int lattice_link_id) {
    if (lattice_link_id < 0 || lattice_link_id >= tree.n_links())
        throw LinkUnknown("lattice link " + std::to_string(lattice_link_id));
    TransportSets out;
    for (int kappa = 1; kappa <= tree.n_physical(); ++kappa) {
        const int phys_id = tree.physical_links[kappa - 1];
        const LatticeLink &pl = tree.links[phys_id];
        // Loop path: origin -> tail, the physical link itself, then the
        // reversed path head -> origin. Opposite traversals of one link do
        // not cancel; each appearance keeps its own orientation membership.
        int pos = 0, neg = 0;
        for (auto [id, dir] : tree.paths[pl.tail])
            if (id == lattice_link_id) (dir > 0 ? pos : neg) += 1;
        if (phys_id == lattice_link_id) pos += 1;
        for (auto [id, dir] : tree.paths[pl.head])
            if (id == lattice_link_id) (dir > 0 ? neg : pos) += 1;
        if (pos > 0) out.plus[kappa] = pos;
        if (neg > 0) out.minus[kappa] = neg;
    }
    return out;
}

ElectricCoefficients::ElectricCoefficients(int n_physical)
    : n_(n_physical), table_(4 * n_physical * n_physical, 0) {}

int ElectricCoefficients::index(int kappa, int kappap, Side z, Side zp) const {
    if (kappa < 1 || kappa > n_ || kappap < 1 || kappap > n_)
        throw LinkUnknown("loop index out of range");
    const int zi = z == Side::L ? 0 : 1;
    const int zj = zp == Side::L ? 0 : 1;
    return ((kappa - 1) * n_ + (kappap - 1)) * 4 + zi * 2 + zj;
}

int &ElectricCoefficients::at(int kappa, int kappap, Side z, Side zp) {
    return table_[index(kappa, kappap, z, zp)];
}

int ElectricCoefficients::at(int kappa, int kappap, Side z, Side zp) const {
    return table_[index(kappa, kappap, z, zp)];
}

ElectricCoefficients electric_coefficients(const LatticeTree &tree) {
    ElectricCoefficients table(tree.n_physical());
    for (int id = 0; id < tree.n_links(); ++id) {
        const TransportSets ts = transport_sets(tree, id);
        // (sum_plus E_L - sum_minus E_R)^2, one minus sign per R factor.
        auto accumulate = [&](const std::map<int, int> &a, Side za,
                              const std::map<int, int> &b, Side zb) {
            const int sign = delta_sign(za) * delta_sign(zb) == 1 ? 1 : -1;
            for (auto [ka, ma] : a)
                for (auto [kb, mb] : b)
                    table.at(ka, kb, za, zb) += sign * ma * mb;
        };
        accumulate(ts.plus, Side::L, ts.plus, Side::L);
        accumulate(ts.plus, Side::L, ts.minus, Side::R);
        accumulate(ts.minus, Side::R, ts.plus, Side::L);
        accumulate(ts.minus, Side::R, ts.minus, Side::R);
    }
    return table;
}

namespace {

// Trace identities (cyclicity, conjugation invariance) allow a canonical
// orientation: start on an undaggered factor, smallest sequence wins.
LoopWord canonical_word(const LoopWord &w) {
    const std::size_t n = w.size();
    bool any_plain = false;
    for (const LoopFactor &f : w) any_plain = any_plain || !f.dagger;
    LoopWord base = w;
    if (!any_plain) {
        LoopWord conj;
        for (auto it = w.rbegin(); it != w.rend(); ++it)
            conj.push_back({it->kappa, !it->dagger});
        base = conj;
    }
    auto less_word = [](const LoopWord &a, const LoopWord &b) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i].kappa != b[i].kappa) return a[i].kappa < b[i].kappa;
            if (a[i].dagger != b[i].dagger) return !a[i].dagger;
        }
        return false;
    };
    std::optional<LoopWord> best;
    for (std::size_t r = 0; r < n; ++r) {
        if (base[r].dagger) continue;
        LoopWord cand;
        for (std::size_t i = 0; i < n; ++i) cand.push_back(base[(r + i) % n]);
        if (!best || less_word(cand, *best)) best = cand;
    }
    return best ? *best : base;
}

} // namespace

std::vector<LoopWord> plaquette_words(const LatticeTree &tree) {
    const LatticeSpec &spec = tree.spec;
    std::map<std::pair<int, int>, int> by_tail_dim;
    for (int id = 0; id < tree.n_links(); ++id)
        by_tail_dim[{tree.links[id].tail, tree.links[id].dim}] = id;

    int n_vert = 1;
    for (int d : spec.dims) n_vert *= d;

    std::vector<LoopWord> words;
    for (int v = 0; v < n_vert; ++v)
        for (int d1 = 0; d1 < ndims(spec); ++d1)
            for (int d2 = d1 + 1; d2 < ndims(spec); ++d2) {
                const auto a = step(spec, v, d1);
                const auto b = step(spec, v, d2);
                if (!a || !b) continue;
                // Edges in traversal order: +d1 from v, +d2 from v+e1,
                // then back along d1 and d2.
                const std::array<std::pair<int, bool>, 4> edges{{
                    {by_tail_dim.at({v, d1}), false},
                    {by_tail_dim.at({*a, d2}), false},
                    {by_tail_dim.at({*b, d1}), true},
                    {by_tail_dim.at({v, d2}), true},
                }};
                LoopWord word;
                for (auto [id, backwards] : edges) {
                    auto kappa = tree.kappa_of(id);
                    if (!kappa) continue;
                    word.push_back({*kappa, backwards});
                }
                if (word.empty())
                    throw TreeInvalid("plaquette collapsed to tree links only");
                if (word.size() > 4)
                    throw UnsupportedLoop("loop word longer than four links");
                words.push_back(canonical_word(word));
            }
    return words;
}

} // namespace smb
