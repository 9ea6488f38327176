#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asflab/engine.hpp"
#include "asflab/linalg.hpp"

// Grids of counts and orbital values over root valuation data, exact
// polynomial interpolation in q, and exact rational-function fitting of the
// generating series (fit on a training window, predict held-out values).
namespace asflab {

struct QPolynomial {
  std::vector<Rational> coeffs;  // low degree first
  int degree() const;
  Rational eval(const Rational& x) const;
  std::string str() const;
};

// Unique interpolating polynomial of degree <= cap through all points;
// throws when no such polynomial fits (needs >= cap + 2 points).
QPolynomial interpolate_q(const std::map<long, Rational>& values, int degree_cap);

// Multi-index power series coefficients, d variables.
using Exponent = std::vector<long>;

struct RationalFit {
  bool found = false;
  int dims = 1;
  std::map<Exponent, Rational> numerator;
  std::map<Exponent, Rational> denominator;  // constant term 1
  std::vector<Exponent> train;
  std::vector<Exponent> validate;
  std::string verdict;  // "exact" | "inconclusive: ..."
  std::string to_json() const;
};

// Smallest exact fit P/Q with Q(0) = 1 reproducing the training
// coefficients and predicting every validation coefficient exactly.  Search
// ascends by (denominator total degree, numerator total degree); holes
// (missing coefficients) drop the equations that touch them.
RationalFit fit_rational(const std::map<Exponent, Rational>& coeffs,
                         const std::vector<Exponent>& train, const std::vector<Exponent>& validate,
                         int dims, int max_den_degree, int max_num_degree);

struct GridCell {
  std::vector<long> n;
  long q = 0;
  std::optional<Int> count;
  std::optional<Rational> orbital;   // J_A(gamma, 1_k)
  bool realizable = true;
};

struct SeriesGrid {
  int d = 1;
  std::vector<long> primes;
  std::vector<GridCell> cells;
  const GridCell* find(const std::vector<long>& n, long q) const;
  std::string to_csv() const;
};

// Brute-force grid over all data with entries <= n_max (box) for the given
// primes; cells whose datum no split gamma over F_q realizes are marked.
SeriesGrid build_series_grid(int d, long n_max, const std::vector<long>& primes,
                             bool with_orbitals);

// Identical counts and orbital values over make_gamma variants of one datum.
bool datum_independence_check(const std::vector<long>& n, long q, int variants = 3);

}  // namespace asflab
