#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "asflab/rational.hpp"

// Combinatorics of the type-A root datum of GL_{n}: roots e_i - e_j, Levi
// subgroups containing the diagonal torus encoded as set partitions of
// {1..n}, parabolic subgroups as ordered set partitions, the spaces a_M with
// the standard inner product, the lattices Lambda_M and the theta constants.
namespace asflab {

// Root e_i - e_j, 1-based indices.
struct RootIndex {
  int i = 0, j = 0;
  RootIndex() = default;
  RootIndex(int i_, int j_) : i(i_), j(j_) {
    if (i == j) throw computation_error("root indices must differ");
  }
  RootIndex negated() const { return RootIndex(j, i); }
  bool operator==(const RootIndex& o) const { return i == o.i && j == o.j; }
  bool operator<(const RootIndex& o) const { return std::tie(i, j) < std::tie(o.i, o.j); }
};

std::vector<RootIndex> all_roots(int n);
std::vector<RootIndex> positive_roots(int n);  // i < j

// Set partition of {1..n}; blocks sorted internally, ordered by block minimum.
class LeviPartition {
 public:
  LeviPartition() = default;
  explicit LeviPartition(int n, std::vector<std::vector<int>> blocks);
  static LeviPartition torus(int n);      // singletons
  static LeviPartition group(int n);      // one block
  static LeviPartition from_key(int n, const std::string& key);

  int n() const { return n_; }
  int num_blocks() const { return (int)blocks_.size(); }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  int block_of(int element) const { return block_of_.at(element - 1); }
  std::string key() const;

  bool refines(const LeviPartition& coarser) const;
  bool operator==(const LeviPartition& o) const { return n_ == o.n_ && blocks_ == o.blocks_; }
  bool operator<(const LeviPartition& o) const { return key() < o.key(); }

  // dim a_M^G = num_blocks - 1
  int rel_dim() const { return num_blocks() - 1; }

 private:
  int n_ = 0;
  std::vector<std::vector<int>> blocks_;
  std::vector<int> block_of_;
};

// Ordered set partition; forgetting order gives the Levi factor.
class ParabolicChain {
 public:
  ParabolicChain() = default;
  explicit ParabolicChain(int n, std::vector<std::vector<int>> ordered_blocks);
  static ParabolicChain from_key(int n, const std::string& key);

  int n() const { return n_; }
  int num_blocks() const { return (int)ordered_.size(); }
  const std::vector<std::vector<int>>& ordered_blocks() const { return ordered_; }
  LeviPartition levi() const;
  std::string key() const;
  // Position of the block containing the element, 0-based.
  int position_of(int element) const { return pos_of_.at(element - 1); }

  bool operator==(const ParabolicChain& o) const { return n_ == o.n_ && ordered_ == o.ordered_; }
  bool operator<(const ParabolicChain& o) const { return key() < o.key(); }

 private:
  int n_ = 0;
  std::vector<std::vector<int>> ordered_;
  std::vector<int> pos_of_;
};

// All set partitions of {1..n}, canonical order (lex on restricted growth).
std::vector<LeviPartition> enumerate_levis(int n);

// P(M): orderings of M's blocks.  L(M): coarsenings.  F(M): ordered coarsenings.
std::vector<ParabolicChain> parabolics_with_levi(const LeviPartition& m);
std::vector<LeviPartition> levis_above(const LeviPartition& m);
std::vector<ParabolicChain> parabolics_above(const LeviPartition& m);

// P^L(M): parabolics of the Levi L with factor M, i.e. orderings of M's
// blocks refining the block structure of L (M-blocks permuted within each
// L-block, L-blocks kept in their canonical order).
std::vector<ParabolicChain> parabolics_with_levi_in(const LeviPartition& m, const LeviPartition& l);
// Q-facet index map: the element of P(L_Q) obtained from R in P^L(M) by
// gluing with Q, i.e. R . N_Q.
ParabolicChain glue(const ParabolicChain& r, const ParabolicChain& q);

// Rational vector constant on the blocks of a Levi.
struct AMVector {
  LeviPartition levi;
  std::vector<Rational> coords;  // length n, block-constant

  AMVector() = default;
  AMVector(LeviPartition m, std::vector<Rational> c);

  Rational block_value(int b) const { return coords.at(levi.blocks()[b][0] - 1); }
  Rational dot(const AMVector& o) const;
  Rational dot_coords(const std::vector<Rational>& v) const;
  AMVector project(const LeviPartition& coarser) const;  // pi_L, block averaging
  bool in_lambda() const;  // block sums integral
  AMVector operator+(const AMVector& o) const;
  AMVector operator-(const AMVector& o) const;
  AMVector scaled(const Rational& c) const;
  bool operator==(const AMVector& o) const { return coords == o.coords; }
  Rational total() const;  // sum of coordinates
};

AMVector project_coords(const std::vector<Rational>& v, const LeviPartition& m);

// Coroot of the adjacent block pair (b, b') of a Levi M: the projection of
// e_i - e_j (i in block b, j in block b') to a_M.
AMVector block_coroot(const LeviPartition& m, int b_from, int b_to);

struct SimpleData {
  // One entry per adjacent pair of ordered blocks of P.
  std::vector<AMVector> coroots;          // Delta_P^vee in a_{M_P}
  std::vector<RootIndex> root_reps;       // representative e_i - e_j per simple root
  Rational covol_sq;                      // Gram determinant of the coroots
};

// Simple roots/coroots of P relative to its Levi, plus the squared covolume
// of the lattice they span (standard inner product).
SimpleData simple_data(const ParabolicChain& p);

// Coroot separating adjacent P, P' in the same P(M); nullopt when P, P' do
// not differ by one adjacent block transposition.
std::optional<AMVector> adjacency(const ParabolicChain& p, const ParabolicChain& q);

// Basis of the block-coroot lattice of (L, M): coroots between consecutive
// M-blocks inside each L-block, canonical order.  A basis of a_M^L.
std::vector<AMVector> pair_lattice_basis(const LeviPartition& m, const LeviPartition& l);

// Squared covolume of the block-coroot lattice of the pair (L, M) inside
// a_M^L.  All polytope volumes in this library are stored in units of this
// lattice; kappa_sq is only needed when reporting Euclidean volumes.
Rational kappa_sq(const LeviPartition& m, const LeviPartition& l);

// theta_M^G(L, L') in the lattice-normalized measures: zero unless
// a_M^L (+) a_M^{L'} -> a_M^G is an isomorphism.
Rational theta_coefficient(const LeviPartition& m, const LeviPartition& l, const LeviPartition& lp);

// Determinant of a square rational matrix (fraction-free elimination).
Rational rational_det(std::vector<std::vector<Rational>> a);

// Coordinates of v in the basis given by the columns of basis; throws if the
// system is inconsistent or the basis is degenerate.
std::vector<Rational> solve_in_basis(const std::vector<std::vector<Rational>>& basis_cols,
                                     const std::vector<Rational>& v);

}  // namespace asflab
