#include "asflab/laurentq.hpp"

#include <algorithm>

namespace asflab {

void LaurentSeriesQ::trim() {
  while (!c_.empty() && c_.front() == 0) {
    c_.erase(c_.begin());
    ++low_;
  }
}

LaurentSeriesQ LaurentSeriesQ::exp_linear(const Rational& a, int order) {
  std::vector<Rational> c(order);
  Rational term = 1;
  for (int k = 0; k < order; ++k) {
    c[k] = term;
    term = term * a / (k + 1);
  }
  return LaurentSeriesQ(0, c);
}

LaurentSeriesQ LaurentSeriesQ::operator+(const LaurentSeriesQ& o) const {
  long lo = std::min(low_, o.low_);
  long hi = std::min(high_excl(), o.high_excl());
  if (c_.empty()) return o;
  if (o.c_.empty()) return *this;
  if (hi <= lo) return LaurentSeriesQ(lo, {});
  std::vector<Rational> c(size_t(hi - lo));
  for (long k = lo; k < hi; ++k) c[size_t(k - lo)] = coeff(k) + o.coeff(k);
  return LaurentSeriesQ(lo, c);
}

LaurentSeriesQ LaurentSeriesQ::operator-(const LaurentSeriesQ& o) const {
  return *this + o.scaled(Rational(-1));
}

LaurentSeriesQ LaurentSeriesQ::scaled(const Rational& v) const {
  std::vector<Rational> c(c_);
  for (auto& x : c) x *= v;
  return LaurentSeriesQ(low_, c);
}

LaurentSeriesQ LaurentSeriesQ::operator*(const LaurentSeriesQ& o) const {
  if (c_.empty() || o.c_.empty()) return LaurentSeriesQ(low_ + o.low_, {});
  long lo = low_ + o.low_;
  long hi = std::min(low_ + o.high_excl(), o.low_ + high_excl());
  std::vector<Rational> c(size_t(hi - lo), Rational(0));
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (size_t j = 0; j < o.c_.size(); ++j) {
      long k = low_ + (long)i + o.low_ + (long)j;
      if (k >= hi) break;
      c[size_t(k - lo)] += c_[i] * o.c_[j];
    }
  }
  return LaurentSeriesQ(lo, c);
}

long LaurentSeriesQ::valuation() const {
  for (size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0) return low_ + (long)i;
  throw computation_error("valuation of a series that vanishes to working order");
}

bool LaurentSeriesQ::is_zero_to_order() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rational& r) { return r == 0; });
}

LaurentSeriesQ LaurentSeriesQ::inverse() const {
  long v = valuation();  // throws on zero
  std::vector<Rational> u(c_.begin() + size_t(v - low_), c_.end());
  std::vector<Rational> b(u.size());
  b[0] = Rational(1) / u[0];
  for (size_t k = 1; k < u.size(); ++k) {
    Rational s = 0;
    for (size_t j = 1; j <= k; ++j) s += u[j] * b[k - j];
    b[k] = -s / u[0];
  }
  return LaurentSeriesQ(-v, b);
}

}  // namespace asflab
