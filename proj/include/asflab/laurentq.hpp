#pragma once

#include <vector>

#include "asflab/rational.hpp"

namespace asflab {

// Truncated Laurent series in one formal variable with exact rational
// coefficients: sum_{k >= low} c_k t^k known for k < low + order.
class LaurentSeriesQ {
 public:
  LaurentSeriesQ() : low_(0) {}
  LaurentSeriesQ(long low, std::vector<Rational> coeffs) : low_(low), c_(std::move(coeffs)) {
    trim();
  }

  static LaurentSeriesQ constant(const Rational& v, int order) {
    std::vector<Rational> c(order, Rational(0));
    if (!c.empty()) c[0] = v;
    return LaurentSeriesQ(0, c);
  }
  static LaurentSeriesQ monomial(long k, const Rational& v, int order) {
    std::vector<Rational> c(order, Rational(0));
    if (!c.empty()) c[0] = v;
    return LaurentSeriesQ(k, c);
  }
  // exp(a t), truncated
  static LaurentSeriesQ exp_linear(const Rational& a, int order);

  long low() const { return low_; }
  int length() const { return (int)c_.size(); }
  long high_excl() const { return low_ + (long)c_.size(); }  // first unknown exponent
  Rational coeff(long k) const {
    if (k < low_ || k >= high_excl()) return Rational(0);
    return c_[size_t(k - low_)];
  }
  bool known(long k) const { return k < high_excl(); }

  LaurentSeriesQ operator+(const LaurentSeriesQ& o) const;
  LaurentSeriesQ operator-(const LaurentSeriesQ& o) const;
  LaurentSeriesQ operator*(const LaurentSeriesQ& o) const;
  LaurentSeriesQ shifted(long k) const { return LaurentSeriesQ(low_ + k, c_); }
  LaurentSeriesQ scaled(const Rational& v) const;
  // Multiplicative inverse; requires the leading coefficient to be nonzero
  // (unit after shifting by the valuation).
  LaurentSeriesQ inverse() const;

  // Valuation of the nonzero part; throws if identically zero to the known order.
  long valuation() const;
  bool is_zero_to_order() const;

 private:
  void trim();  // canonical: drop leading zeros into the known window
  long low_;
  std::vector<Rational> c_;
};

}  // namespace asflab
