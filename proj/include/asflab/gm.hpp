#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "asflab/laurentq.hpp"
#include "asflab/typea.hpp"

// (G,M)-orthogonal sets and (G,M)-families, their hull volumes, lattice point
// counts and the symbolic limit engine.  All volumes are stored in units of
// the block-coroot lattice of the relevant pair (ambient Levi L, Levi M);
// kappa_sq from typea.hpp converts to Euclidean values for reporting.
namespace asflab {

enum class OrthogonalVerdict { positive, orthogonal_not_positive, invalid };

struct ValidationReport {
  OrthogonalVerdict verdict = OrthogonalVerdict::invalid;
  std::string witness;  // offending adjacent pair or missing key
};

// Tuple of points of a_M indexed by P^L(M).  ambient == one-block partition
// for ordinary (G,M)-orthogonal sets; facets of such sets have smaller
// ambient Levi.
struct OrthogonalSet {
  LeviPartition ambient;
  LeviPartition levi;
  std::map<std::string, AMVector> points;

  OrthogonalSet() = default;
  OrthogonalSet(LeviPartition amb, LeviPartition m) : ambient(std::move(amb)), levi(std::move(m)) {}
  static OrthogonalSet zero(const LeviPartition& m);  // ambient G, all points 0

  const AMVector& at(const ParabolicChain& p) const;
  int rel_dim() const;  // dim a_M^L

  OrthogonalSet operator+(const OrthogonalSet& o) const;
  OrthogonalSet negated() const;
  OrthogonalSet translated(const AMVector& lambda) const;
  OrthogonalSet scaled(const Rational& c) const;

  bool integral() const;  // every point in Lambda_M

  std::string to_json() const;                       // ambient G only
  static OrthogonalSet from_json(const std::string& text);
};

ValidationReport validate(const OrthogonalSet& h);

// Point membership a in E(h) and polytope containment E(c) <= E(h), via the
// facet inequalities (domination in every chamber).
bool hull_contains(const OrthogonalSet& h, const AMVector& a);
bool set_contains(const OrthogonalSet& h, const OrthogonalSet& c);

struct HullVolume {
  Rational lattice_units;  // volume w.r.t. the block-coroot lattice of the pair
  Rational kappa_sq;       // squared covolume of that lattice, for reporting
  QSqrt euclidean() const { return QSqrt(lattice_units, kappa_sq); }
};

// Volume of E(h) in the affine slice parallel to a_M^L; 1 for zero-dimensional
// pairs, 0 for degenerate hulls.  Pairs of relative dimension <= 2 (desk scale).
HullVolume hull_volume_direct(const OrthogonalSet& h);

// |E(h) ∩ Lambda_M| by direct box enumeration; h integral positive.
Int lattice_count_enumerate(const OrthogonalSet& h);

// Facet at Q in F^L(M) (result ambient: Levi of Q) and projection to a
// coarser Levi (result levi: L').
OrthogonalSet facet(const OrthogonalSet& h, const ParabolicChain& q);
OrthogonalSet project(const OrthogonalSet& h, const LeviPartition& lp);

// ---------------------------------------------------------------------------

// Family of Laurent evaluators indexed by P^L(M).  Members are evaluated
// along lambda = t*mu for rational directions mu given by coordinates in
// R^n (paired with coroots through the standard inner product).
struct SymbolicFamily {
  using Evaluator = std::function<LaurentSeriesQ(const std::vector<Rational>&, int)>;

  LeviPartition ambient;
  LeviPartition levi;
  std::map<std::string, Evaluator> members;
  std::string kind;

  int rel_dim() const;
};

SymbolicFamily exponential_family(const OrthogonalSet& h);
SymbolicFamily e_family(const LeviPartition& ambient, const LeviPartition& m);
SymbolicFamily e_inverse(const LeviPartition& ambient, const LeviPartition& m);
SymbolicFamily family_product(const SymbolicFamily& a, const SymbolicFamily& b);
SymbolicFamily family_inverse(const SymbolicFamily& a);
SymbolicFamily family_facet(const SymbolicFamily& f, const ParabolicChain& q);
// pi_{L'}: members restrict to directions in a_{L'}; well-definedness across
// refinements is asserted at evaluation time.
SymbolicFamily family_restrict(const SymbolicFamily& f, const LeviPartition& lp);

// Deterministic sequence of generic directions in (a_M^L)^*; genericity means
// nonzero pairing with every block coroot of the pair.
std::vector<Rational> generic_direction(const LeviPartition& ambient, const LeviPartition& m,
                                        int attempt);

// Volume of the family: constant term at t -> 0 of sum_R d_R(t mu)^{-1} f_R(t mu),
// in block-coroot units.  Throws on a genuine pole; retries once with doubled
// working order on inconclusive cancellation.
Rational volume_limit_at(const SymbolicFamily& f, const std::vector<Rational>& mu);
Rational volume_limit(const SymbolicFamily& f);
// Evaluates at `checks` distinct generic directions and asserts agreement.
Rational volume_limit_checked(const SymbolicFamily& f, int checks = 3);

enum class CountMode { enumeration, formula };

// |E(h) ∩ Lambda_M| for integral positive h; formula mode evaluates the
// product of the exponential family with the e-family through the Laurent
// engine, enumeration mode scans a bounding box.
Int lattice_count(const OrthogonalSet& h, CountMode mode);

// Arthur's derived constant s'_Q for the exponential family of a positive
// orthogonal set: the volume of pi_L(E(h)) ∩ closure(a_Q^+) in block-coroot
// units of the pair (G, L_Q).  Optional extension, pinned by identities.
Rational family_prime(const OrthogonalSet& h, const ParabolicChain& q);

// Volume of R_Q(c,d) = (E^Q(c) + a_Q^+) ∩ E(c+d); oracle for family_prime.
Rational region_volume(const OrthogonalSet& c, const OrthogonalSet& d, const ParabolicChain& q);

// Grouped derived constants of a symbolic family: for each Levi L between
// the pair, the sum over Q in P(L) of Arthur's s'_Q, solved exactly from the
// product formula against zonotope probes (whose facet volumes agree across
// P(L)); keyed by the Levi.  The entry at the family's own Levi equals the
// family volume.
std::map<std::string, Rational> derived_constants(const SymbolicFamily& s);

// Deterministic positive integral orthogonal sets used as probes (zonotopes
// from block coroots plus lattice translates).
OrthogonalSet probe_orthogonal_set(const LeviPartition& ambient, const LeviPartition& m, int seed);

// Constants of the count-to-volume inversion inside the group `ambient`: the
// unique family C_M, M between the torus and ambient, with
//   vol E(h) = sum_M |E(h^M) ∩ Lambda| * C_M
// for every integral positive orthogonal set h of the pair (ambient, torus);
// solved exactly from zonotope probes.  Keyed by the Levi M.
std::map<std::string, Rational> count_inversion_constants(const LeviPartition& ambient);

}  // namespace asflab
