#pragma once

#include <map>
#include <string>
#include <vector>

#include "asflab/engine.hpp"

// The exact linear transition between fundamental-domain counts and weighted
// orbital integrals, and the Levi reduction of the weight factor.  All
// quantities are exact rationals in block-coroot units; the measure
// normalization constants cancel term by term.
namespace asflab {

struct TransitionTerm {
  std::string levi_m;
  std::string levi_l;
  int sign = 1;
  Rational orbital;     // J_A^M(gamma, 1_{m cap k}) resp. |D^M|^{1/2} |F^M|
  Rational gm_constant; // v_M^L(Ec(x0)) * e_L resp. (e^{-1})^L_M * Ec(x0)_L
  Rational value;       // signed summand
};

struct TransitionReport {
  std::vector<long> datum;
  long q = 0;
  Int count_direct;          // |F_gamma(F_q)| by enumeration
  Rational count_predicted;  // RHS of the count formula
  Rational orbital_direct;       // J_A(gamma, 1_k) by enumeration
  Rational orbital_from_counts;  // RHS of the inverse formula
  std::vector<TransitionTerm> count_terms;
  std::vector<TransitionTerm> orbital_terms;
  std::map<std::string, Rational> per_levi_orbitals;
  std::map<std::string, Int> per_levi_counts;
  bool count_ok = false;
  bool orbital_ok = false;
  std::string to_json() const;
};

// Per-Levi ingredients around a fixed regular base point.
struct TransitionInstance {
  GammaSpec gamma;
  std::vector<long> datum;
  LatticeRep base;
  OrthogonalSet ec_base;
  std::vector<LeviPartition> levis;
  std::map<std::string, Rational> orbital;   // J_A^M(gamma, 1_{m cap k})
  std::map<std::string, Int> count;          // |F^M_gamma|
  std::map<std::string, long> disc;          // sum of positive-root valuations in M
};

TransitionInstance build_instance(const GammaSpec& gamma, const std::vector<long>& datum);

// RHS of the count-from-orbitals identity; exact, and asserted integral.
Rational predict_count(const TransitionInstance& inst, std::vector<TransitionTerm>* terms = nullptr);

// RHS of the orbital-from-counts identity for J_A(gamma, 1_k).
Rational orbitals_from_counts(const TransitionInstance& inst,
                              std::vector<TransitionTerm>* terms = nullptr);

TransitionReport transition_verify(const GammaSpec& gamma, const std::vector<long>& datum);

// Volume of the restriction of the (G,A) e-family to ia_L^*.
Rational e_restricted_volume(const LeviPartition& l);
// Volume of the pi_M-restriction of the e^{-1}-family intrinsic to L.
Rational e_inverse_restricted_volume(const LeviPartition& l, const LeviPartition& m);
// L-facet volume of Ec_M(x0); asserted independent of the choice of
// parabolic in P(L) (true at regular base points).
Rational facet_volume_checked(const OrthogonalSet& ec, const LeviPartition& m,
                              const LeviPartition& l);

// Chamber selector of the descent formula: the parabolic Q in P(L') whose
// chamber contains the projection of xi to a_{L'}; xi generic in a_M^L.
ParabolicChain chamber_of(const std::vector<Rational>& xi, const LeviPartition& lp);
// Deterministic generic xi in a_M^L for the descent formula.
std::vector<Rational> descent_xi(const LeviPartition& m, const LeviPartition& l, int attempt);

// J_M(gamma, 1_k) through the theta-weighted sum over L of J_A^L(gamma,
// 1_{l cap k}); checked for xi-independence across draws.
Rational reduce_weighted(const GammaSpec& gamma, const LeviPartition& m, int xi_draws = 3);

}  // namespace asflab
