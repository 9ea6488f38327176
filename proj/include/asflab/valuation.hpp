#pragma once

#include <map>
#include <string>
#include <vector>

#include "asflab/typea.hpp"

// Root valuation data of regular diagonal elements over F_q((eps)): the map
// R_gamma, the minimal-form witness, the root filtration, and construction of
// gamma realizing a prescribed datum.
namespace asflab {

// Prime field element, q a small prime.
struct Fq {
  long q = 0;
  long v = 0;
  Fq() = default;
  Fq(long q_, long v_) : q(q_), v(((v_ % q_) + q_) % q_) {}
  Fq operator+(const Fq& o) const { return Fq(q, v + o.v); }
  Fq operator-(const Fq& o) const { return Fq(q, v - o.v + q); }
  Fq operator*(const Fq& o) const { return Fq(q, v * o.v); }
  Fq operator-() const { return Fq(q, q - v); }
  bool operator==(const Fq& o) const { return v == o.v; }
  bool zero() const { return v == 0; }
  Fq inv() const;
};

// Truncated Laurent series over F_q: coefficients for exponents in
// [low, prec); coefficients at exponent >= prec are unknown.
class FqSeries {
 public:
  FqSeries() = default;
  FqSeries(long q, long low, std::vector<long> coeffs, long prec);
  static FqSeries zero(long q, long prec) { return FqSeries(q, 0, {}, prec); }
  static FqSeries monomial(long q, long exp, long coeff, long prec);

  long q() const { return q_; }
  long prec() const { return prec_; }
  Fq coeff(long k) const;

  FqSeries operator+(const FqSeries& o) const;
  FqSeries operator-(const FqSeries& o) const;
  FqSeries operator*(const FqSeries& o) const;
  FqSeries shifted(long k) const;
  FqSeries truncated(long new_prec) const;
  // Raise the declared precision; only valid when the series is known to be
  // a polynomial (every series this library builds is).
  FqSeries poly_extended(long new_prec) const;

  bool is_zero_known() const;  // zero on the known window
  // Valuation; throws a precision error if the series vanishes on the whole
  // known window.
  long valuation() const;
  // val >= k, decidable within precision
  bool val_at_least(long k) const;
  // Exact division by a series of known valuation; result precision shrinks.
  FqSeries divided_by(const FqSeries& o) const;

  std::string str() const;
  bool operator==(const FqSeries& o) const;

 private:
  void trim();
  long q_ = 0;
  long low_ = 0;
  long prec_ = 0;
  std::vector<long> c_;  // canonical: c_[0] != 0 unless empty
};

// Regular integral diagonal element: d+1 truncated series, all of
// valuation >= 0, pairwise differences nonzero within precision.
struct GammaSpec {
  long q = 0;
  long prec = 0;  // working precision K
  std::vector<FqSeries> entries;

  int n() const { return (int)entries.size(); }
  std::string to_json() const;
  static GammaSpec from_json(const std::string& text);
  std::string fingerprint() const;
  GammaSpec restricted(const std::vector<int>& elements) const;  // diagonal subblock
  GammaSpec scaled_by_eps(long k) const;                         // eps^k * gamma
  GammaSpec extended(long new_prec) const;                       // entries are polynomials
};

// val(a_i - a_j) for all i != j; throws naming (i, j) when a difference
// vanishes to working precision.
std::map<std::pair<int, int>, long> root_valuation(const GammaSpec& gamma);

struct RootValuationDatum {
  std::vector<long> n;    // d-tuple, valuations of the ordered simple roots
  std::vector<int> w;     // ordering of {1..d+1} witnessing minimal form
};

// Minimal-form witness: the lexicographically least ordering under which
// every root valuation is the minimum of its constituents; verified
// exhaustively before returning.
RootValuationDatum minimal_form(const std::map<std::pair<int, int>, long>& r, int n);

struct RootFiltration {
  std::vector<long> breaking_points;   // m_1 < ... < m_l
  std::vector<LeviPartition> chain;    // M_1 >= ... >= M_l, proper root systems only
};

RootFiltration filtration(const std::map<std::pair<int, int>, long>& r, int n);

// Deterministic gamma in minimal form with datum n; entries are partial sums
// c_i eps^{n_i} with unit coefficients chosen (backtracking over F_q^x) so
// every window keeps its exact valuation.  `variant` selects between
// distinct realizations of the same datum.  Throws when no choice of
// coefficients over F_q realizes the datum.
GammaSpec make_gamma(const std::vector<long>& n, long q, long prec, int variant = 0);

// Smallest working precision the valuation module needs for the datum.
long default_precision(const std::vector<long>& n);

}  // namespace asflab
