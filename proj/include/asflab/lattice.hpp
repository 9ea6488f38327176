#pragma once

#include <vector>

#include "asflab/gm.hpp"
#include "asflab/valuation.hpp"

// O-lattices in F^n commensurable with the standard lattice, held in a
// canonical triangular form inside a finite eps-window, and their Iwasawa
// retraction vectors H_P.
namespace asflab {

// Canonical form: upper triangular basis, column j has pivot eps^{a_j} at row
// j and entries above it supported on [-N, a_i).
class LatticeRep {
 public:
  LatticeRep() = default;
  LatticeRep(long q, int n, long window, std::vector<long> pivots,
             std::vector<std::vector<FqSeries>> entries_above);

  // Canonicalize an arbitrary basis (columns spanning a full-rank lattice).
  static LatticeRep from_columns(long q, long window, std::vector<std::vector<FqSeries>> cols,
                                 long prec);

  int n() const { return n_; }
  long q() const { return q_; }
  long window() const { return window_; }
  const std::vector<long>& pivots() const { return pivots_; }
  long det_val() const;
  // entry above the diagonal, i < j
  const FqSeries& entry(int i, int j) const { return entries_[size_t(j)][size_t(i)]; }

  std::vector<FqSeries> column(int j, long prec) const;
  bool contains(std::vector<FqSeries> v) const;           // membership
  bool gamma_stable(const GammaSpec& gamma, long shift = 0) const;
  bool window_valid() const;  // eps^N Lambda_0 <= L <= eps^{-N} Lambda_0

  // H_P for the Borel order sigma (a permutation of 1..n): component sigma(k)
  // is the valuation of the induced lattice in the k-th graded piece.
  std::vector<long> h_vector(const std::vector<int>& sigma, long prec) const;

  // Residual action of gamma on L/eps L in the basis of this lattice;
  // requires gamma stable.
  std::vector<std::vector<long>> residual_matrix(const GammaSpec& gamma) const;
  bool residual_regular(const GammaSpec& gamma) const;  // minimal polynomial degree n

  bool operator==(const LatticeRep& o) const;
  bool operator<(const LatticeRep& o) const;  // canonical enumeration order
  std::string str() const;

 private:
  long q_ = 0;
  int n_ = 0;
  long window_ = 0;
  std::vector<long> pivots_;
  // entries_[j][i] for i < j, canonical window
  std::vector<std::vector<FqSeries>> entries_;
};

// H_P of a lattice for a parabolic chain: block sums of the Borel vector,
// returned as the AMVector over the chain's Levi.
AMVector hp_vector(const LatticeRep& l, const ParabolicChain& p, long prec);

// Ec_M(x): the (G,M)-orthogonal set of all H_P, P in P(M).
OrthogonalSet ec_set(const LatticeRep& l, const LeviPartition& m, long prec);

}  // namespace asflab
