#pragma once

#include <complex>
#include <set>
#include <string>
#include <vector>

#include "smb/basis.hpp"
#include "smb/coeffs.hpp"

namespace smb {

// Angular operators acting on the quantum-number part of a state. Rod indices
// are role indices: 1 and 2 are the frame-defining rods, mu/nu/la >= 3.
enum class AngKind {
  Identity,

  // single-rod diagonal family
  RodCasimir,       // Lambda^2_mu
  RodLz,            // Lambda^z_mu
  InternalCasimir,  // N^2 (polar tower between rods 1 and 2)
  SigmaLz,          // Lambda^z_sigma
  TotalCasimir,     // L^2_Tot
  BodyLz,           // L'^z_Tot
  SigmaCasimir,     // Lambda^2_sigma
  SigmaDotLambda2,  // Lambda_sigma . Lambda_2

  // two ordinary rods (mu, nu)
  PairEtaEta,               // eta_mu . eta_nu
  PairEtaCrossLambda,       // eta_mu . (eta_nu x Lambda_nu)
  PairCrossCross,           // (eta_mu x Lambda_mu) . (eta_nu x Lambda_nu)
  PairEtaLambda,            // eta_mu . Lambda_nu
  PairLambdaCrossLambda,    // Lambda_mu . (eta_nu x Lambda_nu)
  PairLambdaLambda,         // Lambda_mu . Lambda_nu

  // rod 2 with ordinary rod mu
  Rod2EtaEta,            // eta_2 . eta_mu
  Rod2EtaCrossMu,        // eta_2 . (eta_mu x Lambda_mu)
  Rod2EtaMuCross2,       // eta_mu . (eta_2 x Lambda_2)
  Rod2CrossCross,        // (eta_mu x Lambda_mu) . (eta_2 x Lambda_2)
  Rod2CrossMuLambda2,    // (eta_mu x Lambda_mu) . Lambda_2
  Rod2EtaLambdaMu,       // eta_2 . Lambda_mu
  Rod2LambdaMuCross2,    // Lambda_mu . (eta_2 x Lambda_2)
  Rod2EtaMuLambda2,      // eta_mu . Lambda_2
  Rod2LambdaLambda,      // Lambda_mu . Lambda_2

  // rod 1 with ordinary rod mu
  Rod1EtaEta,            // eta_1 . eta_mu
  Rod1EtaCrossMu,        // eta_1 . (eta_mu x Lambda_mu)
  Rod1EtaLambdaMu,       // eta_1 . Lambda_mu
  Rod1EtaMuCross1,       // eta_mu . (eta_1 x Lambda_1)
  Rod1EtaMuLambda1,      // eta_mu . Lambda_1
  Rod1CrossCross,        // (eta_mu x Lambda_mu) . (eta_1 x Lambda_1)
  Rod1CrossMuLambda1,    // (eta_mu x Lambda_mu) . Lambda_1   (composite)
  Rod1LambdaMuCross1,    // Lambda_mu . (eta_1 x Lambda_1)
  Rod1LambdaLambda,      // Lambda_mu . Lambda_1              (composite)
  Rod1CrossMuLPrime,     // (eta_mu x Lambda_mu) . L'_Tot
  Rod1LambdaMuLPrime,    // Lambda_mu . L'_Tot

  // rods 1 and 2 together
  Rod12EtaEta,               // eta_1 . eta_2
  Rod12Eta1Cross2,           // eta_1 . (eta_2 x Lambda_2)
  Rod12Eta2Cross1,           // eta_2 . (eta_1 x Lambda_1)
  Rod12Eta2Lambda1,          // eta_2 . Lambda_1
  Rod12Eta1Lambda2,          // eta_1 . Lambda_2
  Rod12BracketCrossCross,    // (eta_2 x Lambda_2).(eta_1 x Lambda_1) + i csc^2(T) eta_2.(eta_1 x Lambda_1)
  Rod12BracketCross2Lambda1, // (eta_2 x Lambda_2).Lambda_1 + i csc^2(T) eta_2.Lambda_1
  Rod12BracketLambda2Cross1, // Lambda_2.(eta_1 x Lambda_1) - i cot(T)csc(T) eta_2.Lambda_1
  Rod12BracketLambdaLambda,  // Lambda_2.Lambda_1 + i cot(T)csc(T) eta_2.(eta_1 x Lambda_1)

  // triple products of unit vectors (loop traces)
  Triple12Mu,    // eta_1 . (eta_2 x eta_mu)
  Triple1MuNu,   // eta_1 . (eta_mu x eta_nu)
  Triple2MuNu,   // eta_2 . (eta_mu x eta_nu)
  TripleMuNuLa,  // eta_mu . (eta_nu x eta_la)
};

struct AngularOperatorId {
  AngKind kind = AngKind::Identity;
  int mu = 0;
  int nu = 0;
  int la = 0;

  bool operator==(const AngularOperatorId&) const = default;
};

struct Transition {
  AngularState target;
  std::complex<double> amplitude;
};

// Exact closed-form action; transitions with vanishing amplitude or targets
// outside |m|<=l, |N|<=L, n>=|sigma| are dropped at coefficient level.
std::vector<Transition> apply(const AngularOperatorId& op, const AngularState& s);

// Kinds whose action is pure multiplication by a function of the angles
// (no derivative content); the oracle comparison tolerance is tighter there.
bool is_multiplicative(AngKind k);

struct Footprint {
  bool can_change_n = false;
  bool can_change_body_n = false;   // N
  bool can_change_l = false;        // some rod's l
  bool can_change_m = false;        // some rod's m
  std::set<int> sigma_deltas;       // subset of {-1, 0, +1}
  int max_rods_changed = 0;         // Theta tower counts as rod 2, N as rod 1
};

Footprint footprint(const AngularOperatorId& op);

// One summand of an electric bilinear: radial factor x angular factor.
enum class RadialKind {
  SecondDerivative,  // d^2/dw_a^2
  MixedDerivative,   // d/dw_a d/dw_b
  FirstDerivative,   // d/dw_a, optionally weighted by cot(w_cot/2)
  DiagGamma,         // Gamma^a_{zz'}(w_a)
  DiagCot,           // cot(w_cot/2)
  DiagCotCot,        // cot(w_a/2) cot(w_b/2)
  DiagOne,
};

struct OperatorTerm {
  RadialKind radial = RadialKind::DiagOne;
  int rod_a = 0;   // rods carrying the radial dependence (role indices)
  int rod_b = 0;   // 0 when only one rod is involved
  int deriv_rod = 0;
  int cot_rod = 0;
  Side za = Side::L;
  Side zb = Side::L;
  AngularOperatorId op;
  std::complex<double> prefactor{1.0, 0.0};
  std::string coeff_label;
};

// The printed decomposition of E_{a,za}.E_{b,zb} before the radial-measure
// substitution. Rods are role indices; n_rods is the total rod count.
std::vector<OperatorTerm> bilinear_terms(int rod_a, int rod_b, Side za, Side zb,
                                         int n_rods);

// Kinds of bilinear for the term-count table.
enum class BilinearClass {
  Rod1Rod1,
  Rod2Rod2,
  MuMu,
  Rod1Rod2,
  Rod1Mu,
  Rod2Mu,
  MuNu,
};

BilinearClass classify_bilinear(int rod_a, int rod_b);

// Distinct quantum-number-change signatures produced by one bilinear acting on
// a generic interior state; reproduces the term-count table rows by honest
// enumeration of the catalog.
int term_class_count(BilinearClass c, int n_rods);

std::vector<Transition> magnetic_angular(const AngularOperatorId& op,
                                         const AngularState& s);

struct CatalogEntry {
  AngularOperatorId op;
  const char* name;
};

// Every operator id instantiated for a given rod count (smallest valid rod
// choices), used by verification sweeps and the catalog export.
std::vector<CatalogEntry> catalog(int n_rods);

}  // namespace smb
