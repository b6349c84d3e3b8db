#pragma once

#include "smb/coeffs.hpp"
#include "smb/errors.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace smb {

// Hypercubic lattice, up to three dimensions, mixed boundary conditions.
// A periodic dimension must have extent >= 2.
struct LatticeSpec {
    std::vector<int> dims;
    std::vector<bool> periodic;
};

// One lattice link: tail vertex plus direction. Canonical orientation is
// from the tail towards increasing coordinate (wrapping when periodic).
struct LatticeLink {
    int tail = 0;
    int head = 0;
    int dim = 0;
};

enum class TreeConvention { Comb };

// Spanning-tree decorated lattice. Links not on the tree are the physical
// degrees of freedom, labelled kappa = 1..n_physical in canonical link
// order. Every vertex stores its unique tree path from the origin as
// (link id, +1/-1) steps.
class LatticeTree {
  public:
    LatticeSpec spec;
    std::vector<LatticeLink> links;
    std::vector<int> tree_links;     // lattice link ids on the tree
    std::vector<int> physical_links; // lattice link ids, index = kappa-1
    int origin = 0;
    std::vector<std::vector<std::pair<int, int>>> paths;

    int n_vertices() const { return static_cast<int>(paths.size()); }
    int n_links() const { return static_cast<int>(links.size()); }
    int n_physical() const { return static_cast<int>(physical_links.size()); }
    bool is_tree_link(int link_id) const;
    // kappa (1-based) for a physical link id, nullopt for tree links.
    std::optional<int> kappa_of(int link_id) const;
};

LatticeTree build_maximal_tree(const LatticeSpec &spec,
                               TreeConvention convention = TreeConvention::Comb);
// Same, with a caller-chosen spanning tree given as lattice link ids.
LatticeTree build_maximal_tree(const LatticeSpec &spec,
                               const std::vector<int> &tree_link_ids);

// Net traversal multiplicities of one lattice link by every loop variable:
// plus[kappa] counts canonical-direction crossings, minus[kappa] reverse
// ones, after opposite traversals cancel.
struct TransportSets {
    std::map<int, int> plus;
    std::map<int, int> minus;
};

TransportSets transport_sets(const LatticeTree &tree, int lattice_link_id);

// Integer table C^{kappa kappa'}_{zeta zeta'} from expanding the squared
// link electric field over loop variables; symmetric under simultaneous
// exchange of (kappa, zeta) with (kappa', zeta').
class ElectricCoefficients {
  public:
    explicit ElectricCoefficients(int n_physical);
    int n_physical() const { return n_; }
    int &at(int kappa, int kappap, Side z, Side zp);
    int at(int kappa, int kappap, Side z, Side zp) const;

  private:
    int n_ = 0;
    std::vector<int> table_;
    int index(int kappa, int kappap, Side z, Side zp) const;
};

ElectricCoefficients electric_coefficients(const LatticeTree &tree);

// One plaquette reduced to its physical links, in traversal order.
struct LoopFactor {
    int kappa = 0;
    bool dagger = false;
};
using LoopWord = std::vector<LoopFactor>;

// All plaquette loop words (tree links dropped). A spanning tree is acyclic,
// so every plaquette keeps at least one physical link.
std::vector<LoopWord> plaquette_words(const LatticeTree &tree);

} // namespace smb
